//! Search for the Möbius parameter λ, with and without a node at the origin.

use cpick::{find_lambda, Complex64, Problem, SearchConfig};

fn main() -> cpick::Result<()> {
    let cfg = SearchConfig::default();

    // Pinned: the zero node fixes λ. The threshold is |w| ≤ |z|^2 = 0.25.
    for t in [0.2, 0.25, 0.3] {
        let p = Problem::from_complex(
            &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
            &[Complex64::new(0.0, 0.0), Complex64::new(t, 0.0)],
        )?;
        let r = find_lambda(&p, 2, 1, &cfg)?;
        println!(
            "t={t}: feasible={} min eigenvalue {:+.3e}",
            r.feasible, r.best_min_eigenvalue
        );
    }

    // Unpinned: grid search followed by Nelder–Mead refinement.
    let p = Problem::from_complex(
        &[
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.4, 0.5),
            Complex64::new(0.1, -0.6),
        ],
        &[
            Complex64::new(0.2, 0.1),
            Complex64::new(0.22, 0.05),
            Complex64::new(0.17, 0.12),
        ],
    )?;
    let r = find_lambda(&p, 4, 1, &cfg)?;
    println!(
        "three points, E=4: feasible={} λ={:?} min eigenvalue {:+.3e} after {} evaluations",
        r.feasible,
        r.lambda.map(|l| l.value()),
        r.best_min_eigenvalue,
        r.evaluations
    );
    Ok(())
}
