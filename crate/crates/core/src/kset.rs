//! Constraint sets `K` of derivative orders that must vanish at the origin.
//!
//! A set is stored through its complement: `n` lies outside `K` exactly when
//! `d` divides `n` and `n / d` is a nonzero element of the numerical
//! semigroup `T = {0, 1, 2, ...} \ gaps`. Finite sets are the `d = 1` case
//! with `gaps = K`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite description of a constraint set `K ⊂ {1, 2, ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KInput", into = "KRepr")]
pub struct KSpec {
    d: u32,
    gaps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct KRepr {
    d: u32,
    gaps: Vec<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum KInput {
    Structured {
        d: u32,
        gaps: Vec<u32>,
    },
    Finite {
        #[serde(rename = "K")]
        k: Vec<u32>,
    },
    List(Vec<u32>),
}

impl TryFrom<KInput> for KSpec {
    type Error = Error;

    fn try_from(input: KInput) -> Result<Self> {
        match input {
            KInput::Structured { d, gaps } => KSpec::new(d, gaps),
            KInput::Finite { k } | KInput::List(k) => KSpec::from_finite_set(&k),
        }
    }
}

impl From<KSpec> for KRepr {
    fn from(k: KSpec) -> Self {
        KRepr { d: k.d, gaps: k.gaps }
    }
}

/// The complement `Z+ \ K = {n_1 d, ..., n_p d, N_0 d, (N_0 + j) d : j ≥ 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementStructure {
    pub d: u32,
    pub heads: Vec<u32>,
    pub n0: u32,
}

impl ComplementStructure {
    /// Membership of `n` in `Z+ \ K` as reconstructed from the structure.
    pub fn in_complement(&self, n: u64) -> bool {
        let d = u64::from(self.d);
        if n == 0 || !n.is_multiple_of(d) {
            return false;
        }
        let q = n / d;
        q >= u64::from(self.n0) || self.heads.iter().any(|&h| u64::from(h) == q)
    }

    /// Smallest positive integer outside the scaled set `K_1`, i.e. `n_1`.
    pub fn first_head(&self) -> u32 {
        self.heads.first().copied().unwrap_or(self.n0)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl KSpec {
    /// Builds a set from its scale `d` and the gap set of the semigroup `T`.
    ///
    /// Gaps are sorted and deduplicated. `d = 1` with no gaps would describe
    /// the empty set and is rejected.
    pub fn new(d: u32, gaps: impl IntoIterator<Item = u32>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidK("scale d must be positive".into()));
        }
        let gaps: BTreeSet<u32> = gaps.into_iter().collect();
        if gaps.contains(&0) {
            return Err(Error::InvalidK("gaps must be positive integers".into()));
        }
        if d == 1 && gaps.is_empty() {
            return Err(Error::InvalidK("K must be nonempty".into()));
        }
        Ok(KSpec {
            d,
            gaps: gaps.into_iter().collect(),
        })
    }

    /// A finite constraint set, stored as `d = 1` with `gaps = K`.
    pub fn from_finite_set(k: &[u32]) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidK("K must be nonempty".into()));
        }
        KSpec::new(1, k.iter().copied())
    }

    /// The prefix set `{1, 2, ..., k}`.
    pub fn prefix(k: u32) -> Result<Self> {
        KSpec::from_finite_set(&(1..=k).collect::<Vec<_>>())
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    fn is_gap(&self, q: u64) -> bool {
        u32::try_from(q)
            .map(|q| self.gaps.binary_search(&q).is_ok())
            .unwrap_or(false)
    }

    fn max_gap(&self) -> u32 {
        self.gaps.last().copied().unwrap_or(0)
    }

    /// Whether the `n`-th derivative is constrained to vanish at the origin.
    pub fn contains(&self, n: u64) -> bool {
        let d = u64::from(self.d);
        !n.is_multiple_of(d) || self.is_gap(n / d)
    }

    /// `K` is finite exactly when it is given by gaps with `d = 1`.
    pub fn is_finite(&self) -> bool {
        self.d == 1
    }

    /// Whether `K = {1, ..., k}` for some `k`; returns that `k`.
    pub fn prefix_len(&self) -> Option<u32> {
        let k = self.max_gap();
        (self.d == 1 && k as usize == self.gaps.len()).then_some(k)
    }

    /// Semigroup criterion: the complement together with 0 is closed under
    /// addition. Only sums up to the largest gap can land on a gap.
    pub fn is_algebra(&self) -> bool {
        let top = self.max_gap();
        for a in 1..top {
            if self.is_gap(a.into()) {
                continue;
            }
            for b in a..=(top - a) {
                if !self.is_gap(b.into()) && self.is_gap((a + b).into()) {
                    return false;
                }
            }
        }
        true
    }

    /// `min(Z+ \ K)`: `d` times the smallest positive element of `T`.
    pub fn smallest_missing(&self) -> u64 {
        let first = (1u64..).find(|&q| !self.is_gap(q)).unwrap_or(1);
        first * u64::from(self.d)
    }

    fn require_algebra(&self) -> Result<()> {
        if self.is_algebra() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{self} does not define an algebra (complement not additively closed)"
            )))
        }
    }

    /// Canonical complement structure: `N_0` starts at the conductor of `T`
    /// and moves up until the heads below it have gcd 1.
    pub fn complement_structure(&self) -> Result<ComplementStructure> {
        self.require_algebra()?;
        let mut n0 = self.max_gap() + 1;
        let mut heads: Vec<u32> = (1..n0).filter(|&q| !self.is_gap(q.into())).collect();
        while heads.is_empty() || heads.iter().copied().fold(0, gcd) != 1 {
            heads.push(n0);
            n0 += 1;
        }
        Ok(ComplementStructure { d: self.d, heads, n0 })
    }

    /// Exponents allowed in the power series of members: `{0} ∪ ([1, bound] \ K)`.
    pub fn monomial_exponents(&self, bound: u64) -> Result<Vec<u64>> {
        self.require_algebra()?;
        Ok(std::iter::once(0)
            .chain((1..=bound).filter(|&e| !self.contains(e)))
            .collect())
    }

    /// Members of `K` in `[1, bound]`.
    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        (1..=bound).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for KSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gaps: Vec<String> = self.gaps.iter().map(u32::to_string).collect();
        if self.d == 1 {
            write!(f, "K={{{}}}", gaps.join(","))
        } else {
            write!(f, "K(d={}, gaps={{{}}})", self.d, gaps.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(list: &[u32]) -> KSpec {
        KSpec::from_finite_set(list).unwrap()
    }

    fn d2() -> KSpec {
        KSpec::new(2, [1]).unwrap()
    }

    // Brute-force closure check over the complement, independent of the gap scan.
    fn closure_oracle(spec: &KSpec, window: u64) -> bool {
        let comp: Vec<u64> = (1..=window).filter(|&n| !spec.contains(n)).collect();
        comp.iter()
            .all(|&a| comp.iter().all(|&b| a + b > window || !spec.contains(a + b)))
    }

    #[test]
    fn membership() {
        assert!(k(&[1]).contains(1));
        assert!(!k(&[1]).contains(2));
        assert!(!d2().contains(4));
        assert!(d2().contains(2));
        assert!(d2().contains(7));
    }

    #[test]
    fn finite_set_construction() {
        assert_eq!(k(&[3, 1]).gaps(), &[1, 3]);
        assert_eq!(k(&[1, 2, 3]).prefix_len(), Some(3));
        assert_eq!(k(&[1, 3]).prefix_len(), None);
        assert!(matches!(KSpec::from_finite_set(&[]), Err(Error::InvalidK(_))));
        assert!(matches!(KSpec::new(1, [0, 1]), Err(Error::InvalidK(_))));
        assert!(matches!(KSpec::new(0, [1]), Err(Error::InvalidK(_))));
        for n in 1..40 {
            assert_eq!(k(&[1, 3, 7]).contains(n), [1, 3, 7].contains(&n));
        }
    }

    #[test]
    fn algebra_examples() {
        assert!(!k(&[2]).is_algebra());
        assert!(k(&[1, 3]).is_algebra());
        // {3, 5, 6, 7, ...} ∪ {0} is additively closed.
        assert!(closure_oracle(&k(&[1, 2, 4]), 40));
        assert!(k(&[1, 2, 4]).is_algebra());
        assert!(d2().is_algebra());
        assert!(KSpec::new(3, []).unwrap().is_algebra());
    }

    #[test]
    fn algebra_matches_oracle_on_small_sets() {
        for mask in 1u32..(1 << 10) {
            let list: Vec<u32> = (1..=10).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            let spec = k(&list);
            assert_eq!(spec.is_algebra(), closure_oracle(&spec, 30), "{spec}");
        }
    }

    #[test]
    fn smallest_missing_values() {
        assert_eq!(k(&[1]).smallest_missing(), 2);
        assert_eq!(k(&[1, 2, 3, 4]).smallest_missing(), 5);
        assert_eq!(k(&[1, 3]).smallest_missing(), 2);
        assert_eq!(d2().smallest_missing(), 4);
    }

    #[test]
    fn complement_structures() {
        let cs = k(&[1]).complement_structure().unwrap();
        assert_eq!((cs.d, cs.heads.clone(), cs.n0), (1, vec![2, 3], 4));
        for kk in 1..6 {
            let cs = KSpec::prefix(kk).unwrap().complement_structure().unwrap();
            assert_eq!((cs.d, cs.heads, cs.n0), (1, vec![kk + 1, kk + 2], kk + 3));
        }
        let cs = d2().complement_structure().unwrap();
        assert_eq!((cs.d, cs.heads.clone(), cs.n0), (2, vec![2, 3], 4));
        for n in 1..=60 {
            assert_eq!(cs.in_complement(n), !d2().contains(n));
        }
        let cs = k(&[1, 3]).complement_structure().unwrap();
        assert_eq!((cs.heads.clone(), cs.n0), (vec![2, 4, 5], 6));
        let cs = KSpec::new(2, []).unwrap().complement_structure().unwrap();
        assert_eq!((cs.d, cs.heads, cs.n0), (2, vec![1], 2));
        assert!(matches!(k(&[2]).complement_structure(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn monomials() {
        assert_eq!(k(&[1]).monomial_exponents(5).unwrap(), vec![0, 2, 3, 4, 5]);
        assert_eq!(k(&[1, 3]).monomial_exponents(6).unwrap(), vec![0, 2, 4, 5, 6]);
        assert_eq!(d2().monomial_exponents(10).unwrap(), vec![0, 4, 6, 8, 10]);
        assert!(k(&[2]).monomial_exponents(4).is_err());
    }

    #[test]
    fn json_forms() {
        let a: KSpec = serde_json::from_str(r#"{"d": 2, "gaps": [1]}"#).unwrap();
        assert_eq!(a, d2());
        let b: KSpec = serde_json::from_str(r#"{"K": [3, 1]}"#).unwrap();
        assert_eq!(b, k(&[1, 3]));
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"d":1,"gaps":[1,3]}"#);
        assert!(serde_json::from_str::<KSpec>(r#"{"K": []}"#).is_err());
    }
}
