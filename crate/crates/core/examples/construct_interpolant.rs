//! Construct and verify an interpolant in H∞_K for several constraint sets.

use cpick::{construct, verify_interpolant, Complex64, KSpec, Mode, Problem, SearchConfig, VerifyConfig};

fn main() -> cpick::Result<()> {
    let p = Problem::from_complex(
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.6, 0.2),
            Complex64::new(-0.3, 0.5),
        ],
        &[
            Complex64::new(0.1, 0.1),
            Complex64::new(0.12, 0.08),
            Complex64::new(0.1, 0.11),
        ],
    )?;
    let cases = [
        (KSpec::prefix(1)?, Mode::Iff),
        (KSpec::prefix(2)?, Mode::Iff),
        (KSpec::from_finite_set(&[1, 3])?, Mode::Sufficient),
        (KSpec::new(2, [1])?, Mode::Sufficient),
    ];
    for (k, mode) in cases {
        match construct(&p, &k, mode, &SearchConfig::default()) {
            Ok(f) => {
                let report = verify_interpolant(&f, &p, &k, &VerifyConfig::default());
                println!(
                    "{k} ({mode}): f = φ_{{-λ}}((z^{})^{} h(z^{})), λ={:.4}, sup {:.6}, max residual {:.1e}, passed={}",
                    f.d,
                    f.m,
                    f.d,
                    f.lambda.value(),
                    report.sup_norm,
                    report.residuals.iter().copied().fold(0.0, f64::max),
                    report.passed
                );
            }
            Err(e) => println!("{k} ({mode}): {e}"),
        }
    }
    Ok(())
}
