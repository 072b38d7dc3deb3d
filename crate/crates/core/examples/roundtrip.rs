//! Generate problems from known interpolants and reconstruct them.

use cpick::interp::roundtrip_generate;
use cpick::{construct, verify_interpolant, KSpec, Mode, SearchConfig, VerifyConfig};

fn main() -> cpick::Result<()> {
    let ks = [
        KSpec::prefix(1)?,
        KSpec::prefix(3)?,
        KSpec::from_finite_set(&[1, 3])?,
        KSpec::new(2, [1])?,
    ];
    for k in &ks {
        let mode = if k.prefix_len().is_some() {
            Mode::Iff
        } else {
            Mode::Sufficient
        };
        let mut ok = 0;
        for seed in 0..20 {
            let (p, _) = roundtrip_generate(k, 1 + seed as usize % 4, seed)?;
            if let Ok(f) = construct(&p, k, mode, &SearchConfig::default()) {
                if verify_interpolant(&f, &p, k, &VerifyConfig::default()).passed {
                    ok += 1;
                }
            }
        }
        println!("{k}: {ok}/20 reconstructed and verified");
    }
    Ok(())
}
