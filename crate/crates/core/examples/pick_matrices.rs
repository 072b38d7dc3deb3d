//! Build constrained Pick matrices and check the factorization identity.

use cpick::pickmat::{constrained_pick, factorization_residual, psd_check, DEFAULT_PSD_TOL};
use cpick::{Complex64, UnitDiskPoint};

fn main() -> cpick::Result<()> {
    let nodes = [
        Complex64::new(0.5, 0.1),
        Complex64::new(-0.3, 0.6),
        Complex64::new(0.2, -0.7),
    ];
    let targets = [
        Complex64::new(0.1, 0.0),
        Complex64::new(0.05, 0.02),
        Complex64::new(-0.04, 0.1),
    ];

    for (exponent, degree) in [(2, 1), (4, 1), (6, 2)] {
        for lambda in [Complex64::new(0.0, 0.0), Complex64::new(0.05, 0.02)] {
            let lambda = UnitDiskPoint::new(lambda)?;
            let m = constrained_pick(&nodes, &targets, lambda, exponent, degree)?;
            let verdict = psd_check(&m, DEFAULT_PSD_TOL)?;
            println!(
                "E={exponent} d={degree} λ={:.2}: min eigenvalue {:+.4e} ({})",
                lambda.value(),
                verdict.min_eigenvalue,
                if verdict.is_psd { "PSD" } else { "not PSD" }
            );
        }
    }

    let h = [
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.2, 0.4),
        Complex64::new(0.6, -0.1),
    ];
    let lambda = UnitDiskPoint::new(Complex64::new(0.2, -0.3))?;
    println!(
        "factorization residual: {:.3e}",
        factorization_residual(&nodes, &h, lambda, 6, 2)?
    );
    Ok(())
}
