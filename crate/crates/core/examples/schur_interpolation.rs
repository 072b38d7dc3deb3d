//! Solve a classical Nevanlinna–Pick problem by the Schur algorithm.

use cpick::analytic::sup_norm_estimate;
use cpick::pickmat::{classical_pick, min_eigenvalue};
use cpick::{np_solve, Complex64, DiskFunction};

fn main() -> cpick::Result<()> {
    let nodes = [
        Complex64::new(0.1, 0.2),
        Complex64::new(-0.5, 0.3),
        Complex64::new(0.4, -0.6),
    ];
    let values = [
        Complex64::new(0.3, 0.0),
        Complex64::new(0.1, -0.2),
        Complex64::new(-0.2, 0.25),
    ];

    let pick = classical_pick(&nodes, &values)?;
    println!("Pick matrix min eigenvalue: {:.6e}", min_eigenvalue(&pick)?);

    let f = np_solve(&nodes, &values)?;
    println!("{}", serde_json::to_string_pretty(&f).unwrap());
    for (z, w) in nodes.iter().zip(&values) {
        println!("f({z:.2}) = {:.12}  target {w}", f.eval(*z));
    }
    println!("sup |f| on |z| = 0.999: {:.9}", sup_norm_estimate(&f, 0.999, 4096));
    Ok(())
}
