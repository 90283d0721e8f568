//! Relative position of two random flags and a basis adapted to both.

use flagres::ffgeom::{common_basis, random_flag, rank_table, relative_position, PrimeField};

fn main() -> flagres::Result<()> {
    let field = PrimeField::new(3)?;
    let p = random_flag(4, field, 7);
    let q = random_flag(4, field, 8);

    let sigma = relative_position(&p, &q)?;
    println!("r(P, Q) = {sigma}, r(Q, P) = {}", relative_position(&q, &p)?);
    for row in rank_table(&p, &q)?.rows() {
        println!("  {row:?}");
    }
    for (i, b) in common_basis(&p, &q)?.iter().enumerate() {
        println!("b_{} = {b:?}  (enters P at {}, Q at {})", i + 1, i + 1, sigma.apply(i + 1));
    }
    Ok(())
}
