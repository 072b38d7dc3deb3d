//! Enumerate Faà di Bruno terms and evaluate a composed derivative.

use cpick::bruno::{bruno_coefficient, compose_derivative, composition_tuples, has_k_factor};
use cpick::{Complex64, KSpec};

fn main() -> cpick::Result<()> {
    let k = KSpec::from_finite_set(&[1, 3])?;
    for order in 1..=5 {
        println!("order {order}:");
        for t in composition_tuples(order)? {
            println!(
                "  b={:?} coefficient={} K-factor={}",
                t.components(),
                bruno_coefficient(&t),
                has_k_factor(&t, &k)
            );
        }
    }

    // g = exp, f = z^2 + z^4 / 2 (f' = f''' = 0 at the origin).
    let f = [0.0, 0.0, 2.0, 0.0, 12.0, 0.0].map(|x| Complex64::new(x, 0.0));
    let g = [Complex64::new(1.0, 0.0); 6];
    for order in 1..=5 {
        println!("(g∘f)^({order})(0) = {}", compose_derivative(&g, &f, order)?);
    }
    Ok(())
}
