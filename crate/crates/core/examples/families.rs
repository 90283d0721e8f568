//! A one-parameter family of flag pairs and the singular locus of its total space.

use flagres::family::{demo_family, relpos_profile, singular_locus_map, Conditions};
use flagres::ffgeom::{Budget, PrimeField};
use flagres::grass::AdmissiblePartition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = PrimeField::new(3)?;
    let fam = demo_family(4, field, 2)?;
    for fiber in relpos_profile(&fam)?.fibers {
        println!("s = {}: {} {:?}", fiber.s, fiber.relative_position, fiber.class);
    }

    let lambda = AdmissiblePartition::parse("1,0", 4)?;
    let cond = Conditions::Grass { lambda: lambda.clone(), lambda2: lambda };
    let rep = singular_locus_map(&fam, &cond, cond.expected_dims(4), Budget::default())?;
    println!("fiber counts {:?}", rep.fiber_counts);
    println!("tangent dimensions {:?}", rep.tangent_histogram);
    for pt in &rep.singular_total {
        println!("singular: {}", serde_json::to_string(&pt.point)?);
    }
    println!("union law holds: {}", rep.union_law_holds());
    Ok(())
}
