//! Bruhat order, reduced words and the smoothness pattern test in S_4.

use flagres::perm::{all_permutations, Permutation};

fn main() -> flagres::Result<()> {
    let sigma: Permutation = "4231".parse()?;
    let word = sigma.reduced_word();
    println!("{sigma}: {} inversions, reduced word {:?}", sigma.inversions(), word.letters());
    println!("{} reduced words in total", sigma.all_reduced_words().len());

    let below = all_permutations(4)?
        .into_iter()
        .filter(|t| t.bruhat_leq(&sigma).unwrap_or(false))
        .count();
    println!("{below} permutations lie below {sigma} in Bruhat order");

    for s in all_permutations(4)? {
        if !s.schubert_is_smooth() {
            println!("X_{s} is singular");
        }
    }
    Ok(())
}
