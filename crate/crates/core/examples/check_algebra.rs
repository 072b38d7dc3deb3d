//! Decide which constraint sets give algebras and print their complement structure.

use cpick::KSpec;

fn main() -> cpick::Result<()> {
    let candidates = [
        KSpec::from_finite_set(&[1])?,
        KSpec::from_finite_set(&[2])?,
        KSpec::from_finite_set(&[1, 3])?,
        KSpec::from_finite_set(&[1, 2, 4])?,
        KSpec::from_finite_set(&[2, 3])?,
        KSpec::new(2, [1])?,
        KSpec::new(3, [1, 2])?,
    ];
    for k in &candidates {
        if k.is_algebra() {
            let cs = k.complement_structure()?;
            println!(
                "{k}: algebra, smallest missing order {}, complement d={} heads={:?} N0={}",
                k.smallest_missing(),
                cs.d,
                cs.heads,
                cs.n0
            );
        } else {
            println!("{k}: not an algebra");
        }
    }
    Ok(())
}
