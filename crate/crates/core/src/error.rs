use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid constraint set: {0}")]
    InvalidK(String),
    #[error("unsupported constraint set: {0}")]
    Unsupported(String),
    #[error("constraint set is not a prefix {{1,...,k}}: {0}")]
    NotPrefixK(String),
    #[error("derivative order {0} outside the supported range 1..=20")]
    OrderTooLarge(usize),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("exponent {exponent} is not divisible by substitution degree {degree}")]
    InvalidExponent { exponent: u32, degree: u32 },
    #[error("interpolation data is infeasible: {0}")]
    Infeasible(String),
    #[error("numerical error: {0}")]
    NumericalError(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no interpolant found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
