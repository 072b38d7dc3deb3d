//! Faà di Bruno expansion of derivatives of a composition `g ∘ f`.
//!
//! Derivative vectors are raw derivatives `f^(0), f^(1), ...` (not Taylor
//! coefficients). The `1/ℓ!` factors of the formula are folded into an exact
//! integer weight per tuple.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kset::KSpec;

pub const MAX_ORDER: usize = 20;

/// Nonnegative `(b_1, ..., b_k)` with `Σ ℓ·b_ℓ = k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionTuple {
    b: Vec<u32>,
}

impl CompositionTuple {
    /// Validates the weighted-sum constraint.
    pub fn new(b: Vec<u32>) -> Result<Self> {
        let weight: usize = b.iter().enumerate().map(|(i, &bl)| (i + 1) * bl as usize).sum();
        if b.is_empty() || weight != b.len() {
            return Err(Error::DomainError(format!(
                "tuple {b:?} does not satisfy sum of l*b_l = k"
            )));
        }
        Ok(CompositionTuple { b })
    }

    pub fn order(&self) -> usize {
        self.b.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.b
    }

    /// `b = b_1 + ... + b_k`, the order of the outer derivative.
    pub fn total(&self) -> usize {
        self.b.iter().map(|&x| x as usize).sum()
    }
}

fn check_order(k: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&k) {
        Ok(())
    } else {
        Err(Error::OrderTooLarge(k))
    }
}

/// All tuples of order `k` in lexicographic order.
pub fn composition_tuples(k: usize) -> Result<Vec<CompositionTuple>> {
    check_order(k)?;
    let mut out = Vec::new();
    let mut b = vec![0u32; k];
    // Fill b_k first so the recursion emits tuples in descending order, then reverse.
    fn fill(level: usize, remaining: usize, b: &mut Vec<u32>, out: &mut Vec<CompositionTuple>) {
        if level == 0 {
            if remaining == 0 {
                out.push(CompositionTuple { b: b.clone() });
            }
            return;
        }
        for count in 0..=remaining / level {
            b[level - 1] = count as u32;
            fill(level - 1, remaining - count * level, b, out);
        }
        b[level - 1] = 0;
    }
    fill(k, k, &mut b, &mut out);
    out.sort();
    Ok(out)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `k! / (Π b_ℓ! · Π (ℓ!)^{b_ℓ})`.
pub fn bruno_coefficient(t: &CompositionTuple) -> u128 {
    let k = t.order();
    let denom: u128 =
        t.b.iter()
            .enumerate()
            .map(|(i, &bl)| factorial(bl as usize) * factorial(i + 1).pow(bl))
            .product();
    factorial(k) / denom
}

/// Whether some index `ℓ` with `b_ℓ > 0` lies in `K`.
pub fn has_k_factor(t: &CompositionTuple, k: &KSpec) -> bool {
    t.b.iter()
        .enumerate()
        .any(|(i, &bl)| bl > 0 && k.contains(i as u64 + 1))
}

/// `(g ∘ f)^(k)(0)` from `g^(j)(f(0))` and `f^(j)(0)`, `j = 0..=k`.
pub fn compose_derivative(g_derivs: &[Complex64], f_derivs: &[Complex64], k: usize) -> Result<Complex64> {
    check_order(k)?;
    if g_derivs.len() <= k || f_derivs.len() <= k {
        return Err(Error::DomainError(format!(
            "order {k} needs {} derivatives, got g: {}, f: {}",
            k + 1,
            g_derivs.len(),
            f_derivs.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for t in composition_tuples(k)? {
        let mut term = g_derivs[t.total()] * bruno_coefficient(&t) as f64;
        for (i, &bl) in t.b.iter().enumerate() {
            if bl > 0 {
                term *= f_derivs[i + 1].powu(bl);
            }
        }
        acc += term;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn order_three_tuples() {
        let t: Vec<Vec<u32>> = composition_tuples(3).unwrap().into_iter().map(|t| t.b).collect();
        assert_eq!(t, vec![vec![0, 0, 1], vec![1, 1, 0], vec![3, 0, 0]]);
        assert_eq!(composition_tuples(1).unwrap()[0].b, vec![1]);
        assert_eq!(composition_tuples(4).unwrap().len(), 5);
        assert_eq!(composition_tuples(20).unwrap().len(), 627);
        assert!(matches!(composition_tuples(0), Err(Error::OrderTooLarge(0))));
        assert!(matches!(composition_tuples(21), Err(Error::OrderTooLarge(21))));
    }

    #[test]
    fn coefficients() {
        let coef = |b: Vec<u32>| bruno_coefficient(&CompositionTuple::new(b).unwrap());
        assert_eq!(coef(vec![1, 1, 0]), 3);
        assert_eq!(coef(vec![3, 0, 0]), 1);
        assert_eq!(coef(vec![0, 0, 1]), 1);
        // Weights of order k sum to the Bell number B_k.
        let bell: u128 = composition_tuples(6).unwrap().iter().map(bruno_coefficient).sum();
        assert_eq!(bell, 203);
        assert!(CompositionTuple::new(vec![1, 1]).is_err());
    }

    #[test]
    fn k_factor() {
        let k13 = KSpec::from_finite_set(&[1, 3]).unwrap();
        let k1 = KSpec::from_finite_set(&[1]).unwrap();
        let t = |b: Vec<u32>| CompositionTuple::new(b).unwrap();
        assert!(has_k_factor(&t(vec![1, 1, 0]), &k13));
        assert!(has_k_factor(&t(vec![0, 0, 1]), &k13));
        assert!(!has_k_factor(&t(vec![0, 1]), &k1));
    }

    #[test]
    fn identity_inner_function() {
        let g = [c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.5), c(7.0, -3.0)];
        let f = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(compose_derivative(&g, &f, 3).unwrap(), g[3]);
    }

    #[test]
    fn third_order_expansion() {
        let g = [c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.5), c(7.0, -3.0)];
        let f = [c(0.2, 0.0), c(0.4, -0.1), c(1.5, 0.3), c(-0.6, 0.8)];
        let expected = g[3] * f[1].powu(3) + g[2] * f[1] * f[2] * 3.0 + g[1] * f[3];
        let got = compose_derivative(&g, &f, 3).unwrap();
        assert!((got - expected).norm() < 1e-12);
    }

    #[test]
    fn vanishing_constrained_derivatives() {
        let g = [c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.5), c(7.0, -3.0)];
        let f = [c(0.2, 0.0), c(0.0, 0.0), c(1.5, 0.3), c(0.0, 0.0)];
        assert_eq!(compose_derivative(&g, &f, 3).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn short_inputs_rejected() {
        let g = [c(1.0, 0.0); 3];
        assert!(compose_derivative(&g, &g, 3).is_err());
        assert!(matches!(compose_derivative(&g, &g, 25), Err(Error::OrderTooLarge(25))));
    }
}
