//! Construction and verification of interpolants in `H∞_K`.
//!
//! Every interpolant has the shape `f(z) = φ_{-λ}((z^d)^m · h(z^d))` with `h`
//! a Schur function. Three exponent plans are available:
//!
//! * `iff`: `K = {1, ..., k}`, `m = k + 1`, `d = 1`. Feasibility of the
//!   constrained Pick matrix is equivalent to existence of an interpolant.
//! * `sufficient`: a PSD matrix guarantees an interpolant; a failed search is
//!   inconclusive.
//! * `necessary`: every interpolant forces a PSD matrix; a certified failure
//!   (pinned `λ`) proves no interpolant exists, a pass proves nothing.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    mobius_unchecked, np_solve, sup_norm_estimate, taylor_coeffs, DiskFunction, SchurFunction, SchurStep, UnitDiskPoint,
};
use crate::bruno::compose_derivative;
use crate::error::{Error, Result};
use crate::feasibility::{find_lambda, maximize_in_disk, FeasibilityResult, Problem, SearchConfig};
use crate::kset::KSpec;
use crate::pickmat::{classical_pick, constrained_pick, min_eigenvalue, psd_check, PsdVerdict};

/// Which theorem-level criterion to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Iff,
    Sufficient,
    Necessary,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iff" => Ok(Mode::Iff),
            "sufficient" => Ok(Mode::Sufficient),
            "necessary" => Ok(Mode::Necessary),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Iff => "iff",
            Mode::Sufficient => "sufficient",
            Mode::Necessary => "necessary",
        })
    }
}

/// Exponent `m` in the substituted variable `V = z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentPlan {
    pub m: u32,
    pub d: u32,
}

impl ExponentPlan {
    /// The exponent `E = m·d` of the matrix numerator.
    pub fn exponent(&self) -> u32 {
        self.m * self.d
    }
}

/// Chooses `(m, d)` for the given mode.
///
/// For `d > 1` the sufficient exponent is `max(n_1 + 1, max(gaps) + 1)`: the
/// inner function `V^m h(V)` must avoid every element of the scaled set
/// `K_1 = gaps`.
pub fn exponent_plan(k: &KSpec, mode: Mode) -> Result<ExponentPlan> {
    if !k.is_algebra() {
        return Err(Error::Unsupported(format!("{k} does not define an algebra")));
    }
    let max_gap = k.gaps().last().copied().unwrap_or(0);
    match mode {
        Mode::Iff => match k.prefix_len() {
            Some(len) => Ok(ExponentPlan { m: len + 1, d: 1 }),
            None => Err(Error::NotPrefixK(k.to_string())),
        },
        Mode::Sufficient if k.d() == 1 => Ok(ExponentPlan { m: max_gap + 1, d: 1 }),
        Mode::Sufficient => {
            let cs = k.complement_structure()?;
            Ok(ExponentPlan {
                m: (cs.first_head() + 1).max(max_gap + 1),
                d: k.d(),
            })
        }
        Mode::Necessary if k.d() == 1 => Ok(ExponentPlan {
            m: k.smallest_missing() as u32,
            d: 1,
        }),
        Mode::Necessary => Ok(ExponentPlan {
            m: k.complement_structure()?.first_head(),
            d: k.d(),
        }),
    }
}

/// `f(z) = φ_{-λ}((z^d)^m · h(z^d))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interpolant {
    pub lambda: UnitDiskPoint,
    pub m: u32,
    pub d: u32,
    #[serde(flatten)]
    pub h: SchurFunction,
}

impl Interpolant {
    /// The inner function `u(z) = (z^d)^m · h(z^d)`, vanishing at the origin.
    pub fn inner(&self, z: Complex64) -> Complex64 {
        let v = z.powu(self.d);
        v.powu(self.m) * self.h.eval(v)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0) {
            return Err(Error::DomainError(format!("|z| = {} > 1", z.norm())));
        }
        Ok(self.eval(z))
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.d == 0 {
            return Err(Error::InvalidConfig("m and d must be positive".into()));
        }
        self.h.validate()
    }
}

impl DiskFunction for Interpolant {
    fn eval(&self, z: Complex64) -> Complex64 {
        mobius_unchecked(-self.lambda.value(), self.inner(z))
    }
}

/// Tolerances and sampling used by [`verify_interpolant`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub tol_interp: f64,
    pub tol_norm: f64,
    pub tol_taylor: f64,
    pub sup_radius: f64,
    pub sup_samples: usize,
    pub taylor_samples: usize,
    /// Multiplier applied to all tolerances for near-singular data.
    pub low_confidence_factor: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol_interp: 1e-7,
            tol_norm: 1e-6,
            tol_taylor: 1e-7,
            sup_radius: 0.999,
            sup_samples: 4096,
            taylor_samples: 1024,
            low_confidence_factor: 100.0,
        }
    }
}

/// Taylor coefficient of a constrained index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorEntry {
    pub index: u64,
    pub modulus: f64,
}

/// Result of checking an interpolant against a problem and a constraint set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub residuals: Vec<f64>,
    pub sup_norm: f64,
    /// Largest `|c_j|` over the constrained indices that were checked.
    pub max_constrained_coefficient: f64,
    pub taylor_violations: Vec<TaylorEntry>,
    pub taylor_bound: usize,
    /// Largest gap between Faà di Bruno and sampled derivatives, orders 1..=6,
    /// as Taylor coefficients. Informational.
    pub derivative_crosscheck: f64,
    pub low_confidence: bool,
    pub passed: bool,
    pub tolerances: VerifyConfig,
}

/// Number of Taylor coefficients checked for membership: `max(12, 4m)` capped at 64.
pub fn taylor_bound(k: &KSpec) -> usize {
    (4 * k.smallest_missing() as usize).clamp(12, 64)
}

/// Derivatives `g^(n)(0)` of `g = φ_{-λ}`, `n = 0..=count`.
fn outer_derivatives(lambda: Complex64, count: usize) -> Vec<Complex64> {
    let scale = 1.0 - lambda.norm_sqr();
    let mut out = vec![lambda];
    let mut fact = 1.0;
    for n in 1..=count {
        fact *= n as f64;
        out.push((-lambda.conj()).powu(n as u32 - 1) * scale * fact);
    }
    out
}

const CROSSCHECK_ORDER: usize = 6;

fn derivative_crosscheck(f: &Interpolant, coeffs: &[Complex64], radius: f64, samples: usize) -> Result<f64> {
    let h = taylor_coeffs(&f.h, CROSSCHECK_ORDER, radius, samples)?;
    let mut inner = [Complex64::new(0.0, 0.0); CROSSCHECK_ORDER + 1];
    for (j, hj) in h.coeffs.iter().enumerate() {
        let e = (f.d * (f.m + j as u32)) as usize;
        if e <= CROSSCHECK_ORDER {
            inner[e] += hj;
        }
    }
    let mut fact = 1.0;
    let inner_derivs: Vec<Complex64> = inner
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j > 0 {
                fact *= j as f64;
            }
            c * fact
        })
        .collect();
    let outer = outer_derivatives(f.lambda.value(), CROSSCHECK_ORDER);
    let mut worst: f64 = 0.0;
    let mut fact = 1.0;
    for k in 1..=CROSSCHECK_ORDER {
        fact *= k as f64;
        let via_bruno = compose_derivative(&outer, &inner_derivs, k)? / fact;
        worst = worst.max((via_bruno - coeffs[k]).norm());
    }
    Ok(worst)
}

/// Checks interpolation, the norm bound and vanishing of constrained Taylor coefficients.
pub fn verify_interpolant(f: &Interpolant, p: &Problem, k: &KSpec, cfg: &VerifyConfig) -> VerificationReport {
    let low_confidence = f.h.low_confidence;
    let widen = if low_confidence { cfg.low_confidence_factor } else { 1.0 };
    let (tol_interp, tol_norm, tol_taylor) = (cfg.tol_interp * widen, cfg.tol_norm * widen, cfg.tol_taylor * widen);

    let residuals: Vec<f64> = p
        .nodes()
        .iter()
        .zip(p.targets())
        .map(|(&z, w)| (f.eval(z) - w).norm())
        .collect();
    let sup_norm = sup_norm_estimate(f, cfg.sup_radius, cfg.sup_samples);

    let bound = taylor_bound(k);
    // Rounding in c_j grows like ε·r^{-j}; a wider circle keeps high orders usable.
    let radius = if bound <= 24 { 0.5 } else { 0.9 };
    let samples = cfg.taylor_samples.max((4 * bound).next_power_of_two());
    let mut taylor_violations = Vec::new();
    let mut max_constrained_coefficient: f64 = 0.0;
    let mut derivative_check = f64::NAN;
    let mut taylor_ok = true;
    match taylor_coeffs(f, bound.max(CROSSCHECK_ORDER), radius, samples) {
        Ok(report) => {
            for j in k.members_up_to(bound as u64) {
                let modulus = report.coeffs[j as usize].norm();
                max_constrained_coefficient = max_constrained_coefficient.max(modulus);
                if !(modulus <= tol_taylor) {
                    taylor_violations.push(TaylorEntry { index: j, modulus });
                }
            }
            derivative_check = derivative_crosscheck(f, &report.coeffs, radius, samples).unwrap_or(f64::NAN);
        }
        Err(e) => {
            log::warn!("taylor extraction failed: {e}");
            taylor_ok = false;
        }
    }

    let passed = taylor_ok
        && residuals.iter().all(|r| *r <= tol_interp)
        && sup_norm <= 1.0 + tol_norm
        && taylor_violations.is_empty();
    VerificationReport {
        residuals,
        sup_norm,
        max_constrained_coefficient,
        taylor_violations,
        taylor_bound: bound,
        derivative_crosscheck: derivative_check,
        low_confidence,
        passed,
        tolerances: VerifyConfig {
            tol_interp,
            tol_norm,
            tol_taylor,
            ..cfg.clone()
        },
    }
}

/// Data for the classical problem solved by `h`: nodes `V_i = z_i^d` and
/// values `V_i^{-m} φ_λ(w_i)`, skipping a node at the origin.
fn h_problem(p: &Problem, plan: ExponentPlan, lambda: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    let zero = p.zero_node();
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (i, (z, w)) in p.nodes().into_iter().zip(p.targets()).enumerate() {
        if Some(i) == zero {
            continue;
        }
        let v = z.powu(plan.d);
        nodes.push(v);
        values.push(mobius_unchecked(lambda, w) / v.powu(plan.m));
    }
    (nodes, values)
}

fn h_conditioning(p: &Problem, plan: ExponentPlan, lambda: Complex64) -> f64 {
    let (nodes, values) = h_problem(p, plan, lambda);
    if values.iter().any(|v| !(v.norm() <= 1.0)) {
        return f64::NEG_INFINITY;
    }
    classical_pick(&nodes, &values)
        .and_then(|m| min_eigenvalue(&m))
        .unwrap_or(f64::NEG_INFINITY)
}

/// Moves an unpinned witness deeper into the feasible region, measured by the
/// smallest eigenvalue of the Pick matrix of `h`. Keeps the original when no
/// improvement stays PSD.
fn polish_lambda(p: &Problem, plan: ExponentPlan, lambda: UnitDiskPoint, cfg: &SearchConfig) -> UnitDiskPoint {
    let start = h_conditioning(p, plan, lambda.value());
    if start >= 1e-6 {
        return lambda;
    }
    let (z, v, _) = maximize_in_disk(|l| h_conditioning(p, plan, l), lambda.value(), 1e-3, cfg.refine_iters);
    if v <= start {
        return lambda;
    }
    let candidate = match UnitDiskPoint::new(z) {
        Ok(c) => c,
        Err(_) => return lambda,
    };
    let still_psd = constrained_pick(&p.nodes(), &p.targets(), candidate, plan.exponent(), plan.d)
        .and_then(|m| psd_check(&m, cfg.tol))
        .map(|v| v.is_psd)
        .unwrap_or(false);
    if still_psd {
        candidate
    } else {
        lambda
    }
}

/// Builds an interpolant in `H∞_K` following the chosen exponent plan.
///
/// Returns [`Error::NotFound`] when the `λ` search fails. In `iff` mode with a
/// node at the origin that verdict is certified; otherwise it is heuristic.
pub fn construct(p: &Problem, k: &KSpec, mode: Mode, cfg: &SearchConfig) -> Result<Interpolant> {
    if mode == Mode::Necessary {
        return Err(Error::Unsupported(
            "the necessary condition does not construct interpolants".into(),
        ));
    }
    let plan = exponent_plan(k, mode)?;
    p.check_powered_distinct(plan.d)?;
    let search = find_lambda(p, plan.exponent(), plan.d, cfg)?;
    let lambda = match (search.feasible, search.lambda) {
        (true, Some(l)) => l,
        _ => {
            let certified = mode == Mode::Iff && search.pinned;
            return Err(Error::NotFound(format!(
                "no PSD lambda for E={} d={} (best min eigenvalue {:.3e}, {})",
                plan.exponent(),
                plan.d,
                search.best_min_eigenvalue,
                if certified { "certified" } else { "heuristic" }
            )));
        }
    };
    let lambda = if search.pinned {
        lambda
    } else {
        polish_lambda(p, plan, lambda, cfg)
    };

    let (nodes, mut values) = h_problem(p, plan, lambda.value());
    for v in values.iter_mut() {
        let r = v.norm();
        if r > 1.0 && r <= 1.0 + 1e-6 {
            *v /= r;
        }
    }
    let h = np_solve(&nodes, &values).map_err(|e| match e {
        Error::Infeasible(msg) | Error::DomainError(msg) => {
            Error::NotFound(format!("h-problem rejected at lambda {lambda}: {msg}"))
        }
        other => other,
    })?;
    let f = Interpolant {
        lambda,
        m: plan.m,
        d: plan.d,
        h,
    };
    let report = verify_interpolant(&f, p, k, &VerifyConfig::default());
    if !report.passed {
        return Err(Error::NumericalError(format!(
            "constructed interpolant failed verification (residuals {:?}, sup {:.9}, violations {:?})",
            report.residuals, report.sup_norm, report.taylor_violations
        )));
    }
    Ok(f)
}

/// Outcome of the necessary-condition test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryOutcome {
    pub passes: bool,
    pub witness: Option<UnitDiskPoint>,
    /// No interpolant exists: the condition failed with `λ` pinned by a zero node.
    pub certified_negative: bool,
    pub plan: ExponentPlan,
    pub search: FeasibilityResult,
}

/// Searches for a `λ` satisfying the necessary condition.
pub fn necessary_check(p: &Problem, k: &KSpec, cfg: &SearchConfig) -> Result<NecessaryOutcome> {
    let plan = exponent_plan(k, Mode::Necessary)?;
    let search = find_lambda(p, plan.exponent(), plan.d, cfg)?;
    Ok(NecessaryOutcome {
        passes: search.feasible,
        witness: search.lambda,
        certified_negative: !search.feasible && search.pinned,
        plan,
        search,
    })
}

/// The necessary-condition matrix evaluated at a given `λ`, e.g. `λ = f(0)`.
pub fn necessary_condition_at(p: &Problem, k: &KSpec, lambda: UnitDiskPoint, tol: f64) -> Result<PsdVerdict> {
    let plan = exponent_plan(k, Mode::Necessary)?;
    let m = constrained_pick(&p.nodes(), &p.targets(), lambda, plan.exponent(), plan.d)?;
    psd_check(&m, tol)
}

fn random_disk_point(rng: &mut ChaCha8Rng, rmin: f64, rmax: f64) -> Complex64 {
    let r = (rmin * rmin + (rmax * rmax - rmin * rmin) * rng.gen::<f64>()).sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Random Schur function `0.9 · e^{iθ} · Π φ_{a_k}`, at most three factors.
fn random_schur(rng: &mut ChaCha8Rng) -> SchurFunction {
    let factors = rng.gen_range(0..=3);
    let steps = (0..factors)
        .map(|_| SchurStep {
            node: random_disk_point(rng, 0.0, 0.8),
            value: Complex64::new(0.0, 0.0),
        })
        .collect();
    SchurFunction {
        steps,
        tail: Complex64::from_polar(0.9, rng.gen_range(0.0..std::f64::consts::TAU)),
        low_confidence: false,
    }
}

/// Deterministic feasible fixture: a random interpolant built with the
/// sufficient plan of `K`, sampled at `n` nodes.
pub fn roundtrip_generate(k: &KSpec, n: usize, seed: u64) -> Result<(Problem, Interpolant)> {
    if !(1..=8).contains(&n) {
        return Err(Error::InvalidConfig(format!("node count {n} outside 1..=8")));
    }
    let plan = exponent_plan(k, Mode::Sufficient)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = UnitDiskPoint::new(random_disk_point(&mut rng, 0.0, 0.8))?;
    let f = Interpolant {
        lambda,
        m: plan.m,
        d: plan.d,
        h: random_schur(&mut rng),
    };

    let mut nodes: Vec<Complex64> = Vec::with_capacity(n);
    while nodes.len() < n {
        let z = random_disk_point(&mut rng, 0.2, 0.9);
        let v = z.powu(plan.d);
        let separated = nodes
            .iter()
            .all(|&y| (y - z).norm() >= 0.1 && (y.powu(plan.d) - v).norm() >= 0.1);
        if separated {
            nodes.push(z);
        }
    }
    let targets: Vec<Complex64> = nodes.iter().map(|&z| f.eval(z)).collect();
    Ok((Problem::from_complex(&nodes, &targets)?, f))
}
