//! Symmetric-group combinatorics: one-line permutations, rank matrices,
//! Bruhat order (rank criterion plus a transitive-closure oracle), reduced
//! words and pattern containment.
//!
//! Word convention: a word `[i_1, ..., i_l]` evaluates to the product
//! `s_{i_l} * ... * s_{i_1}` of functions, i.e. reading letters left to
//! right and swapping the *values* `i` and `i + 1` in one-line notation.
//! With this convention a Bott-Samelson chain driven by a word ends in
//! relative position at most the evaluated permutation, and
//! `[3, 1, 2, 3, 1]` evaluates to `4231`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 12;
pub const MAX_ORACLE_DEGREE: usize = 6;

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from 1-indexed images.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Self {
            images: images.iter().map(|&v| v as u8).collect(),
        })
    }

    fn from_raw(images: Vec<u8>) -> Self {
        Self { images }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self::from_raw((1..=n as u8).collect()))
    }

    /// The order-reversing permutation `n, n-1, ..., 1`.
    pub fn longest(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Self::from_raw((1..=n as u8).rev().collect()))
    }

    /// The simple transposition exchanging `i` and `i + 1`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::LetterOutOfRange { letter: i, n });
        }
        Self::transposition(n, i, i + 1)
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut id = Self::identity(n)?;
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        id.images.swap(i - 1, j - 1);
        Ok(id)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `sigma(i)` for 1-indexed `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.degree()];
        for (pos, &v) in self.images.iter().enumerate() {
            inv[v as usize - 1] = pos as u8 + 1;
        }
        Self::from_raw(inv)
    }

    /// Functional composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        Ok(Self::from_raw(
            other
                .images
                .iter()
                .map(|&v| self.images[v as usize - 1])
                .collect(),
        ))
    }

    /// Swaps the entries in positions `i` and `j` (right multiplication by `t_ij`).
    pub fn swap_positions(&self, i: usize, j: usize) -> Self {
        let mut images = self.images.clone();
        images.swap(i - 1, j - 1);
        Self::from_raw(images)
    }

    /// Swaps the values `a` and `b` (left multiplication by `t_ab`).
    pub fn swap_values(&self, a: usize, b: usize) -> Self {
        let (a, b) = (a as u8, b as u8);
        Self::from_raw(
            self.images
                .iter()
                .map(|&v| if v == a { b } else if v == b { a } else { v })
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Number of pairs `i < j` with `sigma(i) > sigma(j)`.
    pub fn inversions(&self) -> usize {
        let n = self.degree();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn rank_matrix(&self) -> RankMatrix {
        RankMatrix::from_permutation(self)
    }

    /// Bruhat comparison through rank matrices: `sigma <= tau` iff
    /// `r_sigma(i, j) >= r_tau(i, j)` everywhere.
    pub fn bruhat_leq(&self, tau: &Self) -> Result<bool> {
        check_same(self, tau)?;
        let n = self.degree();
        // Running counts per column avoid materializing both matrices.
        let mut rs = vec![0u32; n + 1];
        let mut rt = vec![0u32; n + 1];
        for i in 0..n {
            let (a, b) = (self.images[i] as usize, tau.images[i] as usize);
            for j in 1..=n {
                if a <= j {
                    rs[j] += 1;
                }
                if b <= j {
                    rt[j] += 1;
                }
                if rs[j] < rt[j] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Lexicographically least reduced word.
    pub fn reduced_word(&self) -> ReducedWord {
        let mut current = self.clone();
        let mut letters = Vec::with_capacity(self.inversions());
        while let Some(d) = (1..self.degree()).find(|&d| current.apply(d) > current.apply(d + 1)) {
            letters.push(d);
            current = current.swap_positions(d, d + 1);
        }
        ReducedWord {
            n: self.degree(),
            letters,
        }
    }

    /// Every reduced word, in lexicographic order.
    pub fn all_reduced_words(&self) -> Vec<ReducedWord> {
        fn go(sigma: &Permutation, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let descents: Vec<usize> = (1..sigma.degree())
                .filter(|&d| sigma.apply(d) > sigma.apply(d + 1))
                .collect();
            if descents.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for d in descents {
                prefix.push(d);
                go(&sigma.swap_positions(d, d + 1), prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|letters| ReducedWord {
                n: self.degree(),
                letters,
            })
            .collect()
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains_pattern(&self, pattern: &Self) -> Result<bool> {
        let k = pattern.degree();
        if k > 4 || k > self.degree() {
            return Err(Error::DegreeOutOfRange(k));
        }
        let n = self.degree();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let matches = (0..k).all(|a| {
                (a + 1..k).all(|b| {
                    (self.images[idx[a]] < self.images[idx[b]])
                        == (pattern.images[a] < pattern.images[b])
                })
            });
            if matches {
                return Ok(true);
            }
            // next k-combination of 0..n
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(false);
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Smooth iff the permutation avoids `3412` and `4231`.
    pub fn schubert_is_smooth(&self) -> bool {
        if self.degree() < 4 {
            return true;
        }
        let p3412 = Permutation::from_raw(vec![3, 4, 1, 2]);
        let p4231 = Permutation::from_raw(vec![4, 2, 3, 1]);
        !(self.contains_pattern(&p3412).unwrap_or(false)
            || self.contains_pattern(&p4231).unwrap_or(false))
    }

    /// Position of `self` in [`all_permutations`] order.
    pub fn lex_index(&self) -> usize {
        let n = self.degree();
        let mut index = 0;
        for i in 0..n {
            let smaller = self.images[i + 1..]
                .iter()
                .filter(|&&v| v < self.images[i])
                .count();
            index = index * (n - i) + smaller;
        }
        index
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        Err(Error::DegreeOutOfRange(n))
    } else {
        Ok(())
    }
}

fn check_same(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        Err(Error::DegreeMismatch(a.degree(), b.degree()))
    } else {
        Ok(())
    }
}

/// All permutations of degree `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n == 0 || n > 9 {
        return Err(Error::DegreeOutOfRange(n));
    }
    let mut out = Vec::new();
    let mut current: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation::from_raw(current.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    Ok(out)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.degree() <= 9 { "" } else { "," };
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parsed: Option<Vec<usize>> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let images = parsed.ok_or_else(|| Error::Parse(format!("bad permutation '{s}'")))?;
        Permutation::new(&images)
    }
}

impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `r(i, j) = #{m <= i : sigma(m) <= j}` for `1 <= i, j <= n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RankMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl RankMatrix {
    pub fn from_permutation(sigma: &Permutation) -> Self {
        let n = sigma.degree();
        let mut entries = vec![0u32; n * n];
        for i in 1..=n {
            for j in 1..=n {
                let above = if i > 1 { entries[(i - 2) * n + j - 1] } else { 0 };
                entries[(i - 1) * n + j - 1] = above + u32::from(sigma.apply(i) <= j);
            }
        }
        Self { n, entries }
    }

    /// Builds a table from raw entries `entries[(i-1)*n + (j-1)]`, without validation.
    pub fn from_entries(n: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `r(i, j)`; indices 0 give 0.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        if i == 0 || j == 0 {
            0
        } else {
            self.entries[(i - 1) * self.n + j - 1]
        }
    }

    /// The second difference `r(i,j) - r(i-1,j) - r(i,j-1) + r(i-1,j-1)`.
    pub fn second_difference(&self, i: usize, j: usize) -> i64 {
        self.get(i, j) as i64 - self.get(i - 1, j) as i64 - self.get(i, j - 1) as i64
            + self.get(i - 1, j - 1) as i64
    }

    /// Recovers the permutation; fails unless the second differences form
    /// a permutation matrix.
    pub fn to_permutation(&self) -> Result<Permutation> {
        let n = self.n;
        let mut images = vec![0usize; n];
        for i in 1..=n {
            let mut found = None;
            for j in 1..=n {
                match self.second_difference(i, j) {
                    0 => {}
                    1 if found.is_none() => found = Some(j),
                    _ => return Err(Error::InvalidPermutation(format!("rank table row {i}"))),
                }
            }
            images[i - 1] =
                found.ok_or_else(|| Error::InvalidPermutation(format!("rank table row {i}")))?;
        }
        Permutation::new(&images)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|c| c.to_vec()).collect()
    }
}

/// A word in the simple transpositions `s_1..s_{n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        check_degree(n)?;
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l >= n) {
            return Err(Error::LetterOutOfRange { letter, n });
        }
        Ok(Self { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, letters: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn evaluate(&self) -> Permutation {
        let mut sigma = Permutation::from_raw((1..=self.n as u8).collect());
        for &l in &self.letters {
            sigma = sigma.swap_values(l, l + 1);
        }
        sigma
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.len() == self.evaluate().inversions()
    }

    /// Parses comma-separated letters.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty(n));
        }
        let letters = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad word letter '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn evaluate_word(word: &ReducedWord) -> Permutation {
    word.evaluate()
}

pub fn is_reduced(word: &ReducedWord) -> bool {
    word.is_reduced()
}

/// Reflexive-transitive closure of `sigma < sigma * t_ij` whenever
/// `i < j` and `sigma(i) < sigma(j)`, precomputed per degree.
struct BruhatClosure {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BruhatClosure {
    fn build(n: usize) -> Self {
        let perms = all_permutations(n).expect("degree checked by caller");
        let size = perms.len();
        let words = size.div_ceil(64);
        let mut bits = vec![0u64; size * words];
        // Process from the top: the up-set of sigma is sigma plus the
        // union of up-sets of its successors, which all have more inversions.
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&k| std::cmp::Reverse(perms[k].inversions()));
        for &k in &order {
            let sigma = &perms[k];
            let mut row = vec![0u64; words];
            row[k / 64] |= 1 << (k % 64);
            for i in 1..=n {
                for j in i + 1..=n {
                    if sigma.apply(i) < sigma.apply(j) {
                        let up = sigma.swap_positions(i, j).lex_index();
                        for w in 0..words {
                            row[w] |= bits[up * words + w];
                        }
                    }
                }
            }
            bits[k * words..(k + 1) * words].copy_from_slice(&row);
        }
        Self { size, words, bits }
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        debug_assert!(a < self.size && b < self.size);
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }
}

fn closure(n: usize) -> &'static BruhatClosure {
    static CACHE: [OnceLock<BruhatClosure>; MAX_ORACLE_DEGREE + 1] =
        [const { OnceLock::new() }; MAX_ORACLE_DEGREE + 1];
    CACHE[n].get_or_init(|| BruhatClosure::build(n))
}

/// Independent Bruhat oracle from the covering-generating relation.
pub fn bruhat_leq_oracle(sigma: &Permutation, tau: &Permutation) -> Result<bool> {
    check_same(sigma, tau)?;
    let n = sigma.degree();
    if n > MAX_ORACLE_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    Ok(closure(n).leq(sigma.lex_index(), tau.lex_index()))
}

/// `{tau : tau <= sigma}` from the closure oracle.
pub fn bruhat_lower_set(sigma: &Permutation) -> Result<BTreeSet<Permutation>> {
    let n = sigma.degree();
    if n > MAX_ORACLE_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    let c = closure(n);
    let k = sigma.lex_index();
    Ok(all_permutations(n)?
        .into_iter()
        .enumerate()
        .filter(|(a, _)| c.leq(*a, k))
        .map(|(_, p)| p)
        .collect())
}
