//! The chain resolution of X_4231 over F_2.

use flagres::bott::resolve_schubert;
use flagres::ffgeom::{standard_flag, Budget, PrimeField};
use flagres::perm::ReducedWord;

fn main() -> flagres::Result<()> {
    let field = PrimeField::new(2)?;
    let word = ReducedWord::parse(4, "3,1,2,3,1")?;
    let res = resolve_schubert(&standard_flag(4, field), &word, Budget::default())?;

    println!("word {:?} resolves X_{}", word.letters(), res.sigma);
    println!("{} chains map onto {} flags", res.chains, res.image_size());
    println!("fiber sizes: {:?}", res.fiber_histogram());
    let exact = res.fibers.iter().filter(|f| f.exact_position).count();
    println!("{exact} flags in the open cell, each with a single preimage");
    Ok(())
}
