//! Search over `λ ∈ 𝔻` for a positive semidefinite constrained Pick matrix.
//!
//! When a node sits at the origin every interpolant has `f(0) = w_i`, so `λ`
//! is pinned and the verdict is exact up to the PSD tolerance. Otherwise the
//! search is a polar grid followed by a bounded simplex refinement, and a
//! negative verdict is evidence rather than proof.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{mobius_unchecked, UnitDiskPoint};
use crate::error::{Error, Result};
use crate::pickmat::{self, min_eigenvalue, psd_check, HermitianMatrix, NODE_SEPARATION};

pub const MAX_NODES: usize = 16;

/// Largest modulus a refined `λ` may take.
pub const LAMBDA_CLAMP: f64 = 0.999;

/// Interpolation data: distinct nodes and targets in the open disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct Problem {
    nodes: Vec<UnitDiskPoint>,
    targets: Vec<UnitDiskPoint>,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    nodes: Vec<UnitDiskPoint>,
    targets: Vec<UnitDiskPoint>,
}

impl TryFrom<ProblemRepr> for Problem {
    type Error = Error;

    fn try_from(r: ProblemRepr) -> Result<Self> {
        Problem::new(r.nodes, r.targets)
    }
}

impl From<Problem> for ProblemRepr {
    fn from(p: Problem) -> Self {
        ProblemRepr {
            nodes: p.nodes,
            targets: p.targets,
        }
    }
}

impl Problem {
    pub fn new(nodes: Vec<UnitDiskPoint>, targets: Vec<UnitDiskPoint>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::InvalidProblem(format!(
                "{} nodes but {} targets",
                nodes.len(),
                targets.len()
            )));
        }
        if nodes.is_empty() || nodes.len() > MAX_NODES {
            return Err(Error::InvalidProblem(format!(
                "problem size {} outside 1..={MAX_NODES}",
                nodes.len()
            )));
        }
        let raw: Vec<Complex64> = nodes.iter().map(|p| p.value()).collect();
        pickmat::check_distinct(&raw)?;
        Ok(Problem { nodes, targets })
    }

    /// Convenience constructor from raw complex numbers.
    pub fn from_complex(nodes: &[Complex64], targets: &[Complex64]) -> Result<Self> {
        let wrap = |v: &[Complex64]| v.iter().map(|&z| UnitDiskPoint::new(z)).collect::<Result<Vec<_>>>();
        Problem::new(wrap(nodes)?, wrap(targets)?)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> Vec<Complex64> {
        self.nodes.iter().map(|p| p.value()).collect()
    }

    pub fn targets(&self) -> Vec<Complex64> {
        self.targets.iter().map(|p| p.value()).collect()
    }

    /// Index of the node at the origin, if any (distinctness allows at most one).
    pub fn zero_node(&self) -> Option<usize> {
        self.nodes.iter().position(|p| p.value().norm() <= NODE_SEPARATION)
    }

    /// Rejects problems whose nodes collide after `z ↦ z^d`.
    pub fn check_powered_distinct(&self, degree: u32) -> Result<()> {
        if degree <= 1 {
            return Ok(());
        }
        let powered: Vec<Complex64> = self.nodes().iter().map(|z| z.powu(degree)).collect();
        pickmat::check_distinct(&powered)
            .map_err(|_| Error::InvalidProblem(format!("nodes collide after raising to the power {degree}")))
    }
}

/// Tuning of the `λ` search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub refine_iters: usize,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            radii: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99],
            angles: 64,
            refine_iters: 200,
            tol: pickmat::DEFAULT_PSD_TOL,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.radii.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(Error::InvalidConfig("radii must be nonempty and lie in [0, 1)".into()));
        }
        if self.angles == 0 {
            return Err(Error::InvalidConfig("angles must be positive".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidConfig("tol must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Outcome of the `λ` search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub lambda: Option<UnitDiskPoint>,
    pub best_min_eigenvalue: f64,
    pub evaluations: usize,
    pub pinned: bool,
}

/// Precomputed λ-independent parts of the constrained Pick matrix.
struct PickData {
    high: Vec<Complex64>,
    denom: Vec<Complex64>,
    targets: Vec<Complex64>,
}

impl PickData {
    fn new(p: &Problem, exponent: u32, degree: u32) -> Result<Self> {
        if degree == 0 || !exponent.is_multiple_of(degree) {
            return Err(Error::InvalidExponent { exponent, degree });
        }
        p.check_powered_distinct(degree)?;
        let nodes = p.nodes();
        let n = nodes.len();
        let powered: Vec<Complex64> = nodes.iter().map(|z| z.powu(degree)).collect();
        let mut denom = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                denom[i * n + j] = 1.0 - powered[i] * powered[j].conj();
            }
        }
        Ok(PickData {
            high: nodes.iter().map(|z| z.powu(exponent)).collect(),
            denom,
            targets: p.targets(),
        })
    }

    fn matrix(&self, lambda: Complex64) -> HermitianMatrix {
        let n = self.high.len();
        let moved: Vec<Complex64> = self.targets.iter().map(|&w| mobius_unchecked(lambda, w)).collect();
        HermitianMatrix::from_upper(n, |i, j| {
            (self.high[i] * self.high[j].conj() - moved[i] * moved[j].conj()) / self.denom[i * n + j]
        })
    }

    fn objective(&self, lambda: Complex64) -> f64 {
        match min_eigenvalue(&self.matrix(lambda)) {
            Ok(v) if v.is_finite() => v,
            _ => f64::NEG_INFINITY,
        }
    }
}

/// Smallest eigenvalue of the constrained Pick matrix at `λ`.
pub fn min_eig_objective(lambda: UnitDiskPoint, p: &Problem, exponent: u32, degree: u32) -> Result<f64> {
    let m = pickmat::constrained_pick(&p.nodes(), &p.targets(), lambda, exponent, degree)?;
    min_eigenvalue(&m)
}

fn clamp_to_disk(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > LAMBDA_CLAMP {
        z * (LAMBDA_CLAMP / r)
    } else {
        z
    }
}

/// Bounded Nelder–Mead maximization in the plane, clamped to `|λ| ≤ 0.999`.
///
/// Returns the best point, its value and the number of evaluations used.
pub(crate) fn maximize_in_disk<F: FnMut(Complex64) -> f64>(
    mut f: F,
    start: Complex64,
    step: f64,
    iters: usize,
) -> (Complex64, f64, usize) {
    let mut evals = 0;
    let mut eval = |z: Complex64, evals: &mut usize| {
        *evals += 1;
        f(z)
    };
    let start = clamp_to_disk(start);
    let mut simplex: Vec<(Complex64, f64)> = [
        start,
        clamp_to_disk(start + Complex64::new(step, 0.0)),
        clamp_to_disk(start + Complex64::new(0.0, step)),
    ]
    .into_iter()
    .map(|z| (z, eval(z, &mut evals)))
    .collect();

    let by_value_desc = |a: &(Complex64, f64), b: &(Complex64, f64)| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal);
    for _ in 0..iters {
        simplex.sort_by(by_value_desc);
        let (best, worst) = (simplex[0], simplex[2]);
        if (best.0 - worst.0).norm() < 1e-12 && (best.0 - simplex[1].0).norm() < 1e-12 {
            break;
        }
        let centroid = (simplex[0].0 + simplex[1].0) * 0.5;
        let reflected = clamp_to_disk(centroid + (centroid - worst.0));
        let fr = eval(reflected, &mut evals);
        if fr > best.1 {
            let expanded = clamp_to_disk(centroid + (centroid - worst.0) * 2.0);
            let fe = eval(expanded, &mut evals);
            simplex[2] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > simplex[1].1 {
            simplex[2] = (reflected, fr);
        } else {
            let contracted = if fr > worst.1 {
                centroid + (reflected - centroid) * 0.5
            } else {
                centroid + (worst.0 - centroid) * 0.5
            };
            let fc = eval(contracted, &mut evals);
            if fc > worst.1.max(fr) {
                simplex[2] = (contracted, fc);
            } else {
                for k in 1..3 {
                    let z = best.0 + (simplex[k].0 - best.0) * 0.5;
                    simplex[k] = (z, eval(z, &mut evals));
                }
            }
        }
    }
    simplex.sort_by(by_value_desc);
    (simplex[0].0, simplex[0].1, evals)
}

struct Candidate {
    value: f64,
    radius_index: usize,
    angle_index: usize,
    lambda: Complex64,
}

/// Searches for `λ` making the constrained Pick matrix (exponent `E`,
/// substitution degree `d`) positive semidefinite.
pub fn find_lambda(p: &Problem, exponent: u32, degree: u32, cfg: &SearchConfig) -> Result<FeasibilityResult> {
    cfg.validate()?;
    let data = PickData::new(p, exponent, degree)?;

    if let Some(i) = p.zero_node() {
        let lambda = p.targets[i];
        let value = data.objective(lambda.value());
        let feasible = value >= -cfg.tol;
        log::debug!("pinned lambda {lambda}: min eigenvalue {value:.3e}");
        return Ok(FeasibilityResult {
            feasible,
            lambda: feasible.then_some(lambda),
            best_min_eigenvalue: value,
            evaluations: 1,
            pinned: true,
        });
    }

    let mut evaluations = 0;
    let mut grid = Vec::new();
    for (ri, &r) in cfg.radii.iter().enumerate() {
        let count = if r == 0.0 { 1 } else { cfg.angles };
        for ai in 0..count {
            let lambda = Complex64::from_polar(r, 2.0 * PI * ai as f64 / cfg.angles as f64);
            evaluations += 1;
            grid.push(Candidate {
                value: data.objective(lambda),
                radius_index: ri,
                angle_index: ai,
                lambda,
            });
        }
    }
    // Total order: objective descending, then radius index, then angle index.
    grid.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .unwrap_or(Ordering::Equal)
            .then(a.radius_index.cmp(&b.radius_index))
            .then(a.angle_index.cmp(&b.angle_index))
    });

    let step = 0.5 * PI / cfg.angles as f64;
    let mut best = (grid[0].lambda, grid[0].value);
    for cand in grid.iter().take(3) {
        let (z, v, used) = maximize_in_disk(|l| data.objective(l), cand.lambda, step, cfg.refine_iters);
        evaluations += used;
        if v > best.1 {
            best = (z, v);
        }
    }
    log::debug!(
        "lambda search: best {} with {:.3e} after {evaluations} evaluations",
        best.0,
        best.1
    );

    let lambda = UnitDiskPoint::new(best.0)?;
    let mut feasible = best.1 >= -cfg.tol;
    if feasible {
        feasible = psd_check(&data.matrix(best.0), cfg.tol)?.is_psd;
    }
    Ok(FeasibilityResult {
        feasible,
        lambda: feasible.then_some(lambda),
        best_min_eigenvalue: best.1,
        evaluations,
        pinned: false,
    })
}
