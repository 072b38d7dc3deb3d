//! Nevanlinna–Pick interpolation in the constrained algebras `H∞_K(𝔻)` of
//! bounded analytic functions whose derivatives of the orders in `K` vanish
//! at the origin.
//!
//! The crate decides whether `K` gives an algebra ([`kset`]), expands
//! composition derivatives ([`bruno`]), solves classical Schur problems
//! ([`analytic`]), builds constrained Pick matrices ([`pickmat`]), searches
//! for the Möbius parameter `λ` ([`feasibility`]) and constructs and verifies
//! interpolants ([`interp`]).

// Negated comparisons are deliberate so that NaN inputs are rejected; the
// numeric kernels index matrices directly.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod bruno;
mod cjson;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod interp;
pub mod kset;
pub mod pickmat;

pub use analytic::{mobius, np_solve, DiskFunction, SchurFunction, UnitDiskPoint};
pub use error::{Error, Result};
pub use feasibility::{find_lambda, FeasibilityResult, Problem, SearchConfig};
pub use interp::{construct, necessary_check, verify_interpolant, Interpolant, Mode, VerifyConfig};
pub use kset::{ComplementStructure, KSpec};
pub use num_complex::Complex64;
