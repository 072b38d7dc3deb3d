//! Classical and constrained Pick matrices and positive-semidefiniteness tests.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{mobius_unchecked, UnitDiskPoint};
use crate::error::{Error, Result};

/// Default relative tolerance for PSD verdicts.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Nodes closer than this are considered the same point.
pub const NODE_SEPARATION: f64 = 1e-12;

/// Square complex matrix with exact conjugate symmetry and a real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds the matrix from its upper triangle; the lower triangle is mirrored.
    pub fn from_upper<F: FnMut(usize, usize) -> Complex64>(n: usize, mut entry: F) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(entry(i, i).re, 0.0);
            for j in i + 1..n {
                let v = entry(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v.conj();
            }
        }
        HermitianMatrix { n, entries }
    }

    /// Hermitian part of an arbitrary square matrix given row-major.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidProblem("matrix is not square".into()));
        }
        Ok(Self::from_upper(n, |i, j| (rows[i][j] + rows[j][i].conj()) * 0.5))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.n, other.n, "matrix orders differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Principal submatrix keeping the listed indices.
    pub fn principal(&self, keep: &[usize]) -> HermitianMatrix {
        HermitianMatrix::from_upper(keep.len(), |i, j| self.get(keep[i], keep[j]))
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

/// Outcome of a PSD test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub tolerance_used: f64,
}

/// Smallest eigenvalue of a Hermitian matrix (0 for the empty matrix).
pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    if m.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalError("non-finite matrix entry".into()));
    }
    if m.n == 0 {
        return Ok(0.0);
    }
    if m.n == 1 {
        return Ok(m.entries[0].re);
    }
    let eig = m.to_dmatrix().symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// `is_psd ⟺ λ_min ≥ −tol · max(1, ‖M‖)` with `‖M‖` estimated by Gershgorin.
pub fn psd_check(m: &HermitianMatrix, tol: f64) -> Result<PsdVerdict> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance {tol} must be nonnegative")));
    }
    let min_eigenvalue = min_eigenvalue(m)?;
    let tolerance_used = tol * m.gershgorin_bound().max(1.0);
    Ok(PsdVerdict {
        is_psd: min_eigenvalue >= -tolerance_used,
        min_eigenvalue,
        tolerance_used,
    })
}

/// Rejects coincident nodes.
pub fn check_distinct(nodes: &[Complex64]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).norm() <= NODE_SEPARATION {
                return Err(Error::InvalidProblem(format!(
                    "nodes {i} and {j} coincide ({})",
                    nodes[i]
                )));
            }
        }
    }
    Ok(())
}

fn check_lengths(nodes: &[Complex64], values: &[Complex64]) -> Result<()> {
    if nodes.len() != values.len() {
        return Err(Error::InvalidProblem(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    Ok(())
}

/// `[(1 − v_i conj v_j) / (1 − z_i conj z_j)]`.
pub fn classical_pick(nodes: &[Complex64], values: &[Complex64]) -> Result<HermitianMatrix> {
    check_lengths(nodes, values)?;
    check_distinct(nodes)?;
    Ok(HermitianMatrix::from_upper(nodes.len(), |i, j| {
        (1.0 - values[i] * values[j].conj()) / (1.0 - nodes[i] * nodes[j].conj())
    }))
}

/// `[(z_i^E conj z_j^E − φ_λ(w_i) conj φ_λ(w_j)) / (1 − (z_i conj z_j)^d)]`.
pub fn constrained_pick(
    nodes: &[Complex64],
    targets: &[Complex64],
    lambda: UnitDiskPoint,
    exponent: u32,
    degree: u32,
) -> Result<HermitianMatrix> {
    check_lengths(nodes, targets)?;
    if degree == 0 || !exponent.is_multiple_of(degree) {
        return Err(Error::InvalidExponent { exponent, degree });
    }
    check_distinct(nodes)?;
    let powered: Vec<Complex64> = nodes.iter().map(|z| z.powu(degree)).collect();
    if degree > 1 {
        check_distinct(&powered)
            .map_err(|_| Error::InvalidProblem(format!("nodes collide after raising to the power {degree}")))?;
    }
    let lam = lambda.value();
    let high: Vec<Complex64> = nodes.iter().map(|z| z.powu(exponent)).collect();
    let moved: Vec<Complex64> = targets.iter().map(|&w| mobius_unchecked(lam, w)).collect();
    Ok(HermitianMatrix::from_upper(nodes.len(), |i, j| {
        (high[i] * high[j].conj() - moved[i] * moved[j].conj()) / (1.0 - powered[i] * powered[j].conj())
    }))
}

/// Residual of the congruence `M = D · P_h · D*`.
///
/// `M` is the constrained Pick matrix for targets defined by
/// `φ_λ(w_i) = z_i^E h_i`, and `P_h` is the classical Pick matrix of
/// `(z_i^d, h_i)` with `D = diag(z_i^E)`.
pub fn factorization_residual(
    nodes: &[Complex64],
    h_values: &[Complex64],
    lambda: UnitDiskPoint,
    exponent: u32,
    degree: u32,
) -> Result<f64> {
    check_lengths(nodes, h_values)?;
    if nodes.iter().any(|z| z.norm() == 0.0) {
        return Err(Error::InvalidProblem(
            "zero node makes the diagonal factor singular".into(),
        ));
    }
    if h_values.iter().any(|h| !(h.norm() <= 1.0)) {
        return Err(Error::DomainError("h values must lie in the closed disk".into()));
    }
    let lam = lambda.value();
    let targets: Vec<Complex64> = nodes
        .iter()
        .zip(h_values)
        .map(|(z, h)| mobius_unchecked(-lam, z.powu(exponent) * h))
        .collect();
    if targets.iter().any(|w| !(w.norm() < 1.0)) {
        return Err(Error::DomainError("derived target left the open disk".into()));
    }
    let m1 = constrained_pick(nodes, &targets, lambda, exponent, degree)?;
    let powered: Vec<Complex64> = nodes.iter().map(|z| z.powu(degree)).collect();
    let p = classical_pick(&powered, h_values)?;
    let diag: Vec<Complex64> = nodes.iter().map(|z| z.powu(exponent)).collect();
    let m2 = HermitianMatrix::from_upper(nodes.len(), |i, j| diag[i] * p.get(i, j) * diag[j].conj());
    Ok(m1.max_abs_diff(&m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lam(re: f64, im: f64) -> UnitDiskPoint {
        UnitDiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn classical_examples() {
        let m = classical_pick(&[c(0.5, 0.0)], &[c(0.5, 0.0)]).unwrap();
        assert!((m.get(0, 0).re - 1.0).abs() < 1e-15);
        let m = classical_pick(&[c(0.5, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert!((m.get(0, 0).re - 4.0 / 3.0).abs() < 1e-15);
        let m = classical_pick(&[c(0.0, 0.0), c(0.5, 0.0)], &[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m.get(i, j) - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
        assert!(psd_check(&m, DEFAULT_PSD_TOL).unwrap().min_eigenvalue.abs() < 1e-15);
        assert!(matches!(
            classical_pick(&[c(0.1, 0.0), c(0.1, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn constrained_examples() {
        let m = constrained_pick(&[c(0.5, 0.0)], &[c(0.0, 0.0)], lam(0.0, 0.0), 2, 1).unwrap();
        assert!((m.get(0, 0).re - 1.0 / 12.0).abs() < 1e-15);

        // Zero node with λ equal to its target: that row and column vanish.
        let nodes = [c(0.0, 0.0), c(0.4, 0.2), c(-0.3, 0.5)];
        let targets = [c(0.2, -0.1), c(0.5, 0.0), c(0.1, 0.3)];
        let m = constrained_pick(&nodes, &targets, lam(0.2, -0.1), 3, 1).unwrap();
        for j in 0..3 {
            assert_eq!(m.get(0, j), c(0.0, 0.0));
            assert_eq!(m.get(j, 0), c(0.0, 0.0));
        }

        assert!(matches!(
            constrained_pick(&nodes, &targets, lam(0.0, 0.0), 3, 2),
            Err(Error::InvalidExponent { exponent: 3, degree: 2 })
        ));
        assert!(matches!(
            constrained_pick(&[c(0.5, 0.0), c(-0.5, 0.0)], &targets[..2], lam(0.0, 0.0), 4, 2),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn squares_as_targets_match_factorization() {
        // w_i = z_i^2 with λ = 0 corresponds to h ≡ 1.
        let nodes = [c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.6)];
        let targets: Vec<_> = nodes.iter().map(|z| z * z).collect();
        let m = constrained_pick(&nodes, &targets, lam(0.0, 0.0), 2, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(m.get(i, j).norm() < 1e-15);
            }
        }
        let r = factorization_residual(&nodes, &[c(1.0, 0.0); 3], lam(0.0, 0.0), 2, 1).unwrap();
        assert!(r < 1e-15);
    }

    #[test]
    fn psd_examples() {
        let id = HermitianMatrix::from_upper(3, |i, j| c(if i == j { 1.0 } else { 0.0 }, 0.0));
        let v = psd_check(&id, DEFAULT_PSD_TOL).unwrap();
        assert!(v.is_psd);
        assert!((v.min_eigenvalue - 1.0).abs() < 1e-14);

        let m = HermitianMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let v = psd_check(&m, DEFAULT_PSD_TOL).unwrap();
        assert!(!v.is_psd);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-14);

        let z = HermitianMatrix::from_upper(4, |_, _| c(0.0, 0.0));
        let v = psd_check(&z, DEFAULT_PSD_TOL).unwrap();
        assert!(v.is_psd && v.min_eigenvalue == 0.0);

        let bad = HermitianMatrix::from_upper(2, |_, _| c(f64::NAN, 0.0));
        assert!(matches!(psd_check(&bad, 1e-9), Err(Error::NumericalError(_))));
        assert!(psd_check(&id, -1.0).is_err());
    }

    #[test]
    fn complex_hermitian_eigenvalue() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = HermitianMatrix::from_upper(2, |i, j| if i == j { c(2.0, 0.0) } else { c(0.0, 1.0) });
        assert!((min_eigenvalue(&m).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn factorization_examples() {
        let r = factorization_residual(&[c(0.4, 0.3)], &[c(0.5, 0.0)], lam(0.2, 0.0), 2, 1).unwrap();
        assert!(r <= 1e-14);
        let nodes = [c(0.4, 0.3), c(-0.6, 0.1)];
        let r = factorization_residual(&nodes, &[c(0.0, 0.0); 2], lam(0.2, -0.3), 2, 1).unwrap();
        assert!(r <= 1e-14);
        assert!(factorization_residual(&[c(0.0, 0.0)], &[c(0.5, 0.0)], lam(0.0, 0.0), 2, 1).is_err());
    }
}
