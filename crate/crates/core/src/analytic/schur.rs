use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{mobius_unchecked, DiskFunction};
use crate::error::{Error, Result};
use crate::pickmat::{check_distinct, classical_pick, psd_check, DEFAULT_PSD_TOL};

/// Band around the unit circle inside which a value counts as unimodular.
const BOUNDARY_BAND: f64 = 1e-12;
/// Pick matrices with smallest eigenvalue below this are near-singular.
const LOW_CONFIDENCE_EIG: f64 = 1e-6;
/// Allowed disagreement of the values absorbed by a unimodular constant.
const ABSORBED_VALUE_TOL: f64 = 1e-6;

/// One reduction of the recursion: `F_k(z) = φ_{-value}(b_node(z) · F_{k+1}(z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurStep {
    #[serde(with = "crate::cjson")]
    pub node: Complex64,
    #[serde(with = "crate::cjson")]
    pub value: Complex64,
}

/// A Schur-class function produced by the Schur–Nevanlinna recursion.
///
/// Evaluation unwinds the steps from the terminal constant `tail` outward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurFunction {
    #[serde(rename = "schur_steps")]
    pub steps: Vec<SchurStep>,
    #[serde(with = "crate::cjson")]
    pub tail: Complex64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub low_confidence: bool,
}

impl SchurFunction {
    pub fn constant(c: Complex64) -> Self {
        SchurFunction {
            steps: Vec::new(),
            tail: c,
            low_confidence: false,
        }
    }

    /// Checked evaluation on the closed unit disk.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0) {
            return Err(Error::DomainError(format!("|z| = {} > 1", z.norm())));
        }
        Ok(self.eval(z))
    }

    /// Validates a deserialized function: stored nodes in the open disk, stored
    /// values and tail in the closed disk.
    pub fn validate(&self) -> Result<()> {
        for s in &self.steps {
            if !(s.node.norm() < 1.0) || !(s.value.norm() <= 1.0 + BOUNDARY_BAND) {
                return Err(Error::DomainError(format!(
                    "invalid Schur step (node {}, value {})",
                    s.node, s.value
                )));
            }
        }
        if !(self.tail.norm() <= 1.0 + BOUNDARY_BAND) {
            return Err(Error::DomainError(format!("tail {} outside the disk", self.tail)));
        }
        Ok(())
    }
}

impl DiskFunction for SchurFunction {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.steps.iter().rev().fold(self.tail, |inner, s| {
            let u = mobius_unchecked(s.node, z) * inner;
            mobius_unchecked(-s.value, u)
        })
    }
}

fn unimodular(v: Complex64) -> Complex64 {
    v / v.norm()
}

/// Solves the classical Nevanlinna–Pick problem `F(z_i) = v_i`, `‖F‖ ≤ 1`.
///
/// The free Schur parameter at the last step is 0. Data whose Pick matrix has
/// smallest eigenvalue below `1e-6` yields a result flagged `low_confidence`.
pub fn np_solve(nodes: &[Complex64], values: &[Complex64]) -> Result<SchurFunction> {
    if nodes.len() != values.len() {
        return Err(Error::InvalidProblem(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    for v in values {
        if !(v.norm() <= 1.0 + BOUNDARY_BAND) {
            return Err(Error::DomainError(format!("target {v} outside the closed disk")));
        }
    }
    if values.is_empty() {
        return Ok(SchurFunction::constant(Complex64::new(0.0, 0.0)));
    }

    // Unimodular data only admits the constant solution.
    if values.iter().any(|v| v.norm() >= 1.0 - BOUNDARY_BAND) {
        check_distinct(nodes)?;
        let first = values[0];
        if values.iter().all(|v| (*v - first).norm() <= BOUNDARY_BAND) {
            return Ok(SchurFunction::constant(unimodular(first)));
        }
        return Err(Error::Infeasible(
            "boundary target with a nonconstant interpolation problem".into(),
        ));
    }

    let verdict = psd_check(&classical_pick(nodes, values)?, DEFAULT_PSD_TOL)?;
    if !verdict.is_psd {
        return Err(Error::Infeasible(format!(
            "Pick matrix has eigenvalue {:.3e}",
            verdict.min_eigenvalue
        )));
    }
    let low_confidence = verdict.min_eigenvalue < LOW_CONFIDENCE_EIG;

    let mut vals = values.to_vec();
    let mut steps = Vec::with_capacity(nodes.len());
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 0..nodes.len() {
        let a = vals[k];
        if a.norm() >= 1.0 - BOUNDARY_BAND {
            tail = unimodular(a);
            let spread = vals[k..].iter().map(|v| (*v - tail).norm()).fold(0.0, f64::max);
            if spread > ABSORBED_VALUE_TOL {
                return Err(Error::Infeasible(format!(
                    "reduced data hits the boundary with spread {spread:.3e}"
                )));
            }
            break;
        }
        steps.push(SchurStep {
            node: nodes[k],
            value: a,
        });
        for j in k + 1..nodes.len() {
            let b = mobius_unchecked(nodes[k], nodes[j]);
            vals[j] = mobius_unchecked(a, vals[j]) / b;
            if !(vals[j].norm() <= 1.0 + ABSORBED_VALUE_TOL) {
                return Err(Error::Infeasible(format!(
                    "reduced value {:.6} leaves the disk",
                    vals[j].norm()
                )));
            }
        }
    }
    Ok(SchurFunction {
        steps,
        tail,
        low_confidence,
    })
}
