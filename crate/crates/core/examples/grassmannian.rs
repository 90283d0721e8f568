//! Lines in P^3 meeting two lines: Richardson counts and both resolutions.

use flagres::family::demo_family;
use flagres::ffgeom::{Budget, PrimeField};
use flagres::grass::{exponent_form, resolve_grass_richardson, AdmissiblePartition, Variant};

fn main() -> flagres::Result<()> {
    let lambda = AdmissiblePartition::parse("1,0", 4)?;
    println!("lambda = {:?}, exponent form {:?}", lambda.parts(), exponent_form(&lambda));

    for p in [2, 3] {
        let field = PrimeField::new(p)?;
        let fam = demo_family(4, field, 2)?;
        for s in fam.base().take(2) {
            let (f, g) = fam.flags(s);
            let chain = resolve_grass_richardson(&f, &lambda, &g, &lambda, Variant::Chain, Budget::default())?;
            let example = resolve_grass_richardson(&f, &lambda, &g, &lambda, Variant::Example, Budget::default())?;
            println!(
                "q = {p}, s = {s}: {} lines; chain fibers {:?}, example fibers {:?}",
                chain.image_size(),
                chain.fiber_histogram(),
                example.fiber_histogram()
            );
        }
    }
    Ok(())
}
