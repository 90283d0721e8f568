use super::field::PrimeField;
use super::flag::Budget;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// All `k`-dimensional subspaces of `F_p^n` as reduced row echelon `k x n`
/// matrices, ordered by pivot columns and then by free entries.
pub fn enumerate_subspaces(
    n: usize,
    k: usize,
    field: PrimeField,
    budget: Budget,
) -> Result<Vec<Matrix>> {
    if k > n {
        return Err(Error::DimensionMismatch(format!("k = {k} > n = {n}")));
    }
    budget.check(gaussian_binomial(n, k, field.p() as u64))?;
    let q = field.p();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                let pivots = &pivots;
                (pc + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        for mut t in 0..count {
            let mut m = Matrix::zeros(field, k, n);
            for (i, &pc) in pivots.iter().enumerate() {
                m.set(i, pc, 1);
            }
            // first free position is the most significant digit
            for &(i, c) in free.iter().rev() {
                m.set(i, c, (t % q as u64) as u32);
                t /= q as u64;
            }
            out.push(m);
        }
        // next k-combination of 0..n
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}
