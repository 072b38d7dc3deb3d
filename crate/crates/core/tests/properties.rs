use cpick::analytic::{mobius_unchecked, sup_norm_estimate, taylor_coeffs, DiskFunction};
use cpick::bruno::{compose_derivative, composition_tuples, has_k_factor};
use cpick::interp::{exponent_plan, roundtrip_generate};
use cpick::pickmat::{constrained_pick, psd_check};
use cpick::{find_lambda, np_solve, Complex64, KSpec, Mode, SearchConfig, UnitDiskPoint};
use proptest::prelude::*;

fn disk_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)),
        len,
    )
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Derivatives `p^(j)(x)` for `j = 0..=count`.
fn poly_derivs(p: &[Complex64], x: Complex64, count: usize) -> Vec<Complex64> {
    (0..=count)
        .map(|j| {
            p.iter()
                .enumerate()
                .skip(j)
                .map(|(i, c)| c * x.powu((i - j) as u32) * (factorial(i) / factorial(i - j)))
                .sum()
        })
        .collect()
}

/// Finite constraint sets within `[1, 10]` that give algebras.
fn algebra_k() -> impl Strategy<Value = KSpec> {
    (1u32..1024)
        .prop_map(|mask| {
            let list: Vec<u32> = (1..=10).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            KSpec::from_finite_set(&list).unwrap()
        })
        .prop_filter("algebra", |k| k.is_algebra())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_is_an_involutive_disk_automorphism(a in disk_point(0.95), z in disk_point(0.999)) {
        let w = mobius_unchecked(a, z);
        prop_assert!(w.norm() < 1.0);
        prop_assert!((mobius_unchecked(-a, w) - z).norm() < 1e-10);
        prop_assert!(mobius_unchecked(a, a).norm() < 1e-15);
    }

    #[test]
    fn schur_solution_reproduces_data(
        zeros in prop::collection::vec(disk_point(0.8), 0..3),
        tail in disk_point(0.9),
        nodes in prop::collection::vec(disk_point(0.9), 1..5),
    ) {
        let g = |z: Complex64| zeros.iter().fold(tail, |acc, &a| acc * mobius_unchecked(a, z));
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[..i] {
                prop_assume!((a - b).norm() > 0.05);
            }
        }
        let values: Vec<Complex64> = nodes.iter().map(|&z| g(z)).collect();
        let f = np_solve(&nodes, &values).unwrap();
        for (z, w) in nodes.iter().zip(&values) {
            prop_assert!((f.eval(*z) - w).norm() < 1e-8);
        }
        prop_assert!(sup_norm_estimate(&f, 0.999, 512) <= 1.0 + 1e-9);
    }

    #[test]
    fn taylor_recovers_polynomials_and_shifts(p in coeffs(6)) {
        let scale: f64 = p.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
        let f = |z: Complex64| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c) / scale;
        let shifted = |z: Complex64| z * f(z);
        let a = taylor_coeffs(&f, 8, 0.5, 64).unwrap();
        let b = taylor_coeffs(&shifted, 8, 0.5, 64).unwrap();
        for (j, pj) in p.iter().enumerate() {
            prop_assert!((a.coeffs[j] - pj / scale).norm() < 1e-12);
            prop_assert!((b.coeffs[j + 1] - a.coeffs[j]).norm() < 1e-12);
        }
        prop_assert!(b.coeffs[0].norm() < 1e-12);
    }

    #[test]
    fn open_mapping_keeps_nonconstant_values_inside(zeros in prop::collection::vec(disk_point(0.8), 1..3), z in disk_point(0.99)) {
        let g = |z: Complex64| zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| acc * mobius_unchecked(a, z));
        prop_assert!(g.eval(z).norm() < 1.0);
    }

    #[test]
    fn constrained_pick_is_permutation_equivariant(
        nodes in prop::collection::vec(disk_point(0.9), 2..6),
        targets in prop::collection::vec(disk_point(0.9), 6),
        lambda in disk_point(0.9),
        rot in 1usize..5,
    ) {
        let n = nodes.len();
        let targets = &targets[..n];
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[..i] {
                prop_assume!((a * a - b * b).norm() > 1e-3);
            }
        }
        let lambda = UnitDiskPoint::new(lambda).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let pn: Vec<Complex64> = perm.iter().map(|&i| nodes[i]).collect();
        let pt: Vec<Complex64> = perm.iter().map(|&i| targets[i]).collect();
        let m = constrained_pick(&nodes, targets, lambda, 4, 2).unwrap();
        let pm = constrained_pick(&pn, &pt, lambda, 4, 2).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((pm.get(i, j) - m.get(perm[i], perm[j])).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn composition_derivatives_match_polynomial_composition(g in coeffs(7), f in coeffs(7), k in 1usize..=6) {
        // Coefficients of g(f(z)) up to degree k by Horner in the polynomial ring.
        let mut comp = vec![Complex64::new(0.0, 0.0)];
        for c in g.iter().rev() {
            comp = poly_mul(&comp, &f);
            comp[0] += c;
            comp.truncate(k + 1);
        }
        let expected = comp.get(k).copied().unwrap_or_default() * factorial(k);
        let f_derivs = poly_derivs(&f, Complex64::new(0.0, 0.0), k);
        let g_derivs = poly_derivs(&g, f[0], k);
        let got = compose_derivative(&g_derivs, &f_derivs, k).unwrap();
        prop_assert!((got - expected).norm() <= 1e-9 * expected.norm().max(1.0), "{got} vs {expected}");
    }

    #[test]
    fn every_expansion_term_carries_a_k_factor(k in algebra_k()) {
        for order in k.members_up_to(12) {
            for t in composition_tuples(order as usize).unwrap() {
                prop_assert!(has_k_factor(&t, &k), "{k}: order {order} tuple {:?}", t.components());
            }
        }
    }

    #[test]
    fn complement_structure_describes_complement(k in algebra_k()) {
        let cs = k.complement_structure().unwrap();
        for n in 1..=(3 * cs.n0) {
            prop_assert_eq!(cs.in_complement(u64::from(n)), !k.contains(u64::from(n)));
        }
    }

    #[test]
    fn infinite_sets_complement_structure(d in 2u32..5, gaps in prop::collection::vec(1u32..8, 0..4)) {
        let k = KSpec::new(d, gaps.clone());
        prop_assume!(k.is_ok());
        let k = k.unwrap();
        if k.is_algebra() {
            let cs = k.complement_structure().unwrap();
            prop_assert_eq!(cs.d, d);
            for n in 1..=(3 * cs.n0 * d) {
                prop_assert_eq!(cs.in_complement(u64::from(n)), !k.contains(u64::from(n)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_problems_are_feasible_with_verified_witness(which in 0usize..5, n in 1usize..=4, seed in any::<u64>()) {
        let k = [
            KSpec::prefix(1).unwrap(),
            KSpec::prefix(2).unwrap(),
            KSpec::prefix(3).unwrap(),
            KSpec::from_finite_set(&[1, 3]).unwrap(),
            KSpec::new(2, [1]).unwrap(),
        ][which].clone();
        let mode = if k.prefix_len().is_some() { Mode::Iff } else { Mode::Sufficient };
        let plan = exponent_plan(&k, mode).unwrap();
        let (p, _) = roundtrip_generate(&k, n, seed).unwrap();
        let cfg = SearchConfig::default();
        let res = find_lambda(&p, plan.exponent(), plan.d, &cfg).unwrap();
        prop_assert!(res.feasible);
        let lambda = res.lambda.unwrap();
        let m = constrained_pick(&p.nodes(), &p.targets(), lambda, plan.exponent(), plan.d).unwrap();
        prop_assert!(psd_check(&m, cfg.tol).unwrap().is_psd);
    }
}
