//! Evaluable analytic functions on the unit disk: Möbius maps, the
//! Schur–Nevanlinna interpolation engine, Cauchy-formula Taylor extraction and
//! sup-norm sampling.

mod schur;
mod taylor;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use schur::{np_solve, SchurFunction, SchurStep};
pub use taylor::{taylor_coeffs, TaylorReport};

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct UnitDiskPoint(Complex64);

impl UnitDiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() && value.norm() < 1.0 {
            Ok(UnitDiskPoint(value))
        } else {
            Err(Error::DomainError(format!("{value} is not in the open unit disk")))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        UnitDiskPoint(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<[f64; 2]> for UnitDiskPoint {
    type Error = Error;

    fn try_from([re, im]: [f64; 2]) -> Result<Self> {
        Self::from_re_im(re, im)
    }
}

impl From<UnitDiskPoint> for [f64; 2] {
    fn from(p: UnitDiskPoint) -> Self {
        [p.0.re, p.0.im]
    }
}

impl From<UnitDiskPoint> for Complex64 {
    fn from(p: UnitDiskPoint) -> Self {
        p.0
    }
}

impl fmt::Display for UnitDiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Something that can be evaluated on the closed unit disk.
pub trait DiskFunction {
    fn eval(&self, z: Complex64) -> Complex64;
}

impl<F: Fn(Complex64) -> Complex64> DiskFunction for F {
    fn eval(&self, z: Complex64) -> Complex64 {
        self(z)
    }
}

/// `φ_λ(z) = (z − λ) / (1 − conj(λ) z)` without domain checks.
#[inline]
pub fn mobius_unchecked(lambda: Complex64, z: Complex64) -> Complex64 {
    (z - lambda) / (Complex64::new(1.0, 0.0) - lambda.conj() * z)
}

/// The disk automorphism `φ_λ`, vanishing at `λ`.
pub fn mobius(lambda: UnitDiskPoint, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 1.0) {
        return Err(Error::DomainError(format!("|z| = {} > 1", z.norm())));
    }
    Ok(mobius_unchecked(lambda.0, z))
}

/// Maximum of `|F|` over `samples` equispaced points of the circle `|z| = radius`.
pub fn sup_norm_estimate<F: DiskFunction + ?Sized>(f: &F, radius: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|t| {
            let theta = 2.0 * PI * t as f64 / samples as f64;
            f.eval(Complex64::from_polar(radius, theta)).norm()
        })
        .fold(0.0, f64::max)
}
