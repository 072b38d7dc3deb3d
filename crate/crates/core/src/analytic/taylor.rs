use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::DiskFunction;
use crate::error::{Error, Result};

/// Taylor coefficients `c_0 ... c_B` recovered from samples on `|z| = radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub radius: f64,
    pub samples: usize,
    #[serde(with = "crate::cjson::vec")]
    pub coeffs: Vec<Complex64>,
}

impl TaylorReport {
    /// Raw derivative `f^(j)(0) = j! c_j`.
    pub fn derivative(&self, j: usize) -> Complex64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.coeffs[j] * fact
    }
}

/// Discretized Cauchy formula
/// `c_j = r^{-j} / N · Σ_t F(r e^{2πit/N}) e^{-2πijt/N}`.
///
/// For `|F| ≤ 1` on the closed disk the aliasing error of `c_j` is at most
/// `r^{N-j} / (1 - r^N) · r^{-j}`; floating-point rounding contributes about
/// `ε · r^{-j}`, which is what limits the usable range of `j` at small radii.
pub fn taylor_coeffs<F: DiskFunction + ?Sized>(
    f: &F,
    count: usize,
    radius: f64,
    samples: usize,
) -> Result<TaylorReport> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidConfig(format!("radius {radius} not in (0, 1)")));
    }
    if !samples.is_power_of_two() || samples < 4 * count.max(1) {
        return Err(Error::InvalidConfig(format!(
            "sample count {samples} must be a power of two and at least 4 * {count}"
        )));
    }
    let mut buf: Vec<Complex64> = (0..samples)
        .map(|t| f.eval(Complex64::from_polar(radius, 2.0 * PI * t as f64 / samples as f64)))
        .collect();
    FftPlanner::new().plan_fft_forward(samples).process(&mut buf);
    let n = samples as f64;
    let coeffs = buf
        .iter()
        .take(count + 1)
        .enumerate()
        .map(|(j, x)| x / n * radius.powi(-(j as i32)))
        .collect();
    Ok(TaylorReport {
        radius,
        samples,
        coeffs,
    })
}
