//! Recover point-count polynomials of Richardson varieties from several primes.

use std::collections::BTreeMap;

use flagres::ffgeom::{opposite_flag, standard_flag, Budget, PrimeField};
use flagres::interp::point_count_polynomial;
use flagres::schubert::richardson_counts;

fn main() -> flagres::Result<()> {
    let n = 3;
    let mut samples: BTreeMap<_, BTreeMap<u64, u128>> = BTreeMap::new();
    for p in [2, 3, 5, 7] {
        let field = PrimeField::new(p)?;
        let counts = richardson_counts(&standard_flag(n, field), &opposite_flag(n, field), Budget::default())?;
        for (key, c) in counts {
            samples.entry(key).or_default().insert(p as u64, c);
        }
    }
    for ((sigma, tau), counts) in &samples {
        let poly = point_count_polynomial(counts, 3)?;
        println!("R({sigma}, {tau}): {poly}  (degree {})", poly.degree);
    }
    Ok(())
}
