//! Point counts and tangent dimensions of Schubert varieties in Fl(F_3^4).

use flagres::ffgeom::{standard_flag, Budget, PrimeField};
use flagres::perm::all_permutations;
use flagres::schubert::{enumerate_schubert, tangent_dimension, SchubertDatum};

fn main() -> flagres::Result<()> {
    let field = PrimeField::new(3)?;
    let base = standard_flag(4, field);
    for sigma in all_permutations(4)? {
        let datum = SchubertDatum::new(base.clone(), sigma.clone())?;
        let points = enumerate_schubert(&datum, Budget::default())?;
        let tangent = tangent_dimension(&base, &[datum])?.tangent_dim;
        let mark = if tangent > sigma.inversions() { "  singular at the base flag" } else { "" };
        println!("X_{sigma}: {:>5} points, dim {}, tangent {tangent}{mark}", points.len(), sigma.inversions());
    }
    Ok(())
}
