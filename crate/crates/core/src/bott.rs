//! Bott-Samelson chains of flags and the resolution maps they define.
//!
//! A chain driven by the word `i_1 .. i_l` is a sequence `F^0, .., F^l` where
//! `F^j` differs from `F^(j-1)` at most in its `i_j`-dimensional piece. The
//! last flag of a chain starting at `P` lies in the Schubert variety of
//! `(P, evaluate(word))`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffgeom::{relative_position, Budget, Flag, Matrix};
use crate::perm::{Permutation, ReducedWord};
use crate::schubert::{enumerate_richardson, enumerate_schubert, SchubertDatum};

/// A chain of flags driven by a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub word: ReducedWord,
    pub flags: Vec<Flag>,
}

impl Chain {
    pub fn last(&self) -> &Flag {
        self.flags.last().expect("a chain has at least its anchor")
    }

    /// Each step has relative position identity or the step's simple
    /// transposition.
    pub fn is_valid(&self) -> Result<bool> {
        let n = self.word.n();
        if self.flags.len() != self.word.len() + 1 {
            return Ok(false);
        }
        for (k, &i) in self.word.letters().iter().enumerate() {
            let r = relative_position(&self.flags[k], &self.flags[k + 1])?;
            if !r.is_identity() && r != Permutation::simple(n, i)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Fiber of a resolution over one target point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport<T> {
    pub target: T,
    pub fiber_size: usize,
    /// Whether the target lies in the locus where every defining rank
    /// inequality is an equality.
    pub exact_position: bool,
}

/// The `q + 1` flags agreeing with `f` away from dimension `i`, sorted.
pub fn step_options(f: &Flag, i: usize) -> Result<Vec<Flag>> {
    let n = f.n();
    if i == 0 || i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let field = f.field();
    let b = f.basis();
    let (lo, hi) = (b.row(i - 1).to_vec(), b.row(i).to_vec());
    let with_rows = |x: Vec<u32>, y: Vec<u32>| -> Result<Flag> {
        let mut data = b.data().to_vec();
        data[(i - 1) * n..i * n].copy_from_slice(&x);
        data[i * n..(i + 1) * n].copy_from_slice(&y);
        Flag::from_matrix(&Matrix::from_data(field, n, n, data)?)
    };
    let mut out = Vec::with_capacity(field.p() as usize + 1);
    for t in field.elements() {
        let x: Vec<u32> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &c)| field.add(a, field.mul(t, c)))
            .collect();
        out.push(with_rows(x, hi.clone())?);
    }
    out.push(with_rows(hi.clone(), lo.clone())?);
    out.sort();
    Ok(out)
}

fn chain_count(q: u32, len: usize) -> u128 {
    (q as u128 + 1).pow(len as u32)
}

/// All `(q + 1)^l` chains anchored at `p`, depth first.
pub fn enumerate_chains(p: &Flag, word: &ReducedWord, budget: Budget) -> Result<Vec<Chain>> {
    check_word(p, word)?;
    budget.check(chain_count(p.field().p(), word.len()))?;
    let mut out = Vec::new();
    let mut prefix = vec![p.clone()];
    dfs(word, &mut prefix, &mut out)?;
    Ok(out)
}

fn dfs(word: &ReducedWord, prefix: &mut Vec<Flag>, out: &mut Vec<Chain>) -> Result<()> {
    let depth = prefix.len() - 1;
    if depth == word.len() {
        out.push(Chain {
            word: word.clone(),
            flags: prefix.clone(),
        });
        return Ok(());
    }
    for next in step_options(prefix.last().unwrap(), word.letters()[depth])? {
        prefix.push(next);
        dfs(word, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

fn check_word(p: &Flag, word: &ReducedWord) -> Result<()> {
    if word.n() != p.n() {
        return Err(Error::DegreeMismatch(word.n(), p.n()));
    }
    Ok(())
}

/// Number of chains ending at each flag, without materializing the chains.
pub fn final_flag_counts(p: &Flag, word: &ReducedWord, budget: Budget) -> Result<HashMap<Flag, usize>> {
    check_word(p, word)?;
    budget.check(chain_count(p.field().p(), word.len()))?;
    let letters = word.letters();
    let Some((&first, rest)) = letters.split_first() else {
        return Ok([(p.clone(), 1)].into_iter().collect());
    };
    fn walk(f: Flag, rest: &[usize], acc: &mut HashMap<Flag, usize>) -> Result<()> {
        match rest.split_first() {
            None => *acc.entry(f).or_default() += 1,
            Some((&i, tail)) => {
                for g in step_options(&f, i)? {
                    walk(g, tail, acc)?;
                }
            }
        }
        Ok(())
    }
    step_options(p, first)?
        .into_par_iter()
        .map(|g| {
            let mut acc = HashMap::new();
            walk(g, rest, &mut acc)?;
            Ok(acc)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            Ok(a)
        })
}

fn require_reduced(word: &ReducedWord) -> Result<Permutation> {
    if !word.is_reduced() {
        return Err(Error::NotReduced(word.to_string()));
    }
    Ok(word.evaluate())
}

/// Resolution of a Schubert variety by chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchubertResolution {
    pub sigma: Permutation,
    pub chains: u128,
    pub fibers: Vec<FiberReport<Flag>>,
}

impl SchubertResolution {
    pub fn image_size(&self) -> usize {
        self.fibers.len()
    }

    /// Fiber size -> number of targets with that fiber size.
    pub fn fiber_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(&self.fibers)
    }
}

pub(crate) fn histogram<T>(fibers: &[FiberReport<T>]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for f in fibers {
        *h.entry(f.fiber_size).or_default() += 1;
    }
    h
}

/// Pushes every chain to its last flag and checks that the image is the
/// Schubert variety and that fibers over the cell are single points.
pub fn resolve_schubert(p: &Flag, word: &ReducedWord, budget: Budget) -> Result<SchubertResolution> {
    let sigma = require_reduced(word)?;
    let counts = final_flag_counts(p, word, budget)?;
    let datum = SchubertDatum::new(p.clone(), sigma.clone())?;
    let expected: BTreeSet<Flag> = enumerate_schubert(&datum, budget)?.into_iter().collect();
    let image: BTreeSet<Flag> = counts.keys().cloned().collect();
    if let Some(v) = image.symmetric_difference(&expected).next() {
        return Err(Error::ResolutionMismatch(format!("image differs at {v}")));
    }
    let mut fibers = Vec::with_capacity(image.len());
    for v in image {
        let exact = relative_position(p, &v)? == sigma;
        let size = counts[&v];
        if exact && size != 1 {
            return Err(Error::ResolutionMismatch(format!("fiber of size {size} over cell point {v}")));
        }
        fibers.push(FiberReport {
            target: v,
            fiber_size: size,
            exact_position: exact,
        });
    }
    Ok(SchubertResolution {
        sigma,
        chains: chain_count(p.field().p(), word.len()),
        fibers,
    })
}

/// Resolution of a Richardson set by pairs of chains with a common last flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichardsonResolution {
    pub sigma: Permutation,
    pub tau: Permutation,
    /// Pairs of chains before matching last flags.
    pub pairs: u128,
    pub fibers: Vec<FiberReport<Flag>>,
}

impl RichardsonResolution {
    pub fn image_size(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(&self.fibers)
    }
}

/// Joins the chain families from `p` and `q` on their last flag and checks
/// the image against the Richardson set and the fibers over the exact locus.
pub fn resolve_richardson(
    p: &Flag,
    word_sigma: &ReducedWord,
    q: &Flag,
    word_tau: &ReducedWord,
    budget: Budget,
) -> Result<RichardsonResolution> {
    let sigma = require_reduced(word_sigma)?;
    let tau = require_reduced(word_tau)?;
    let left = final_flag_counts(p, word_sigma, budget)?;
    let right = final_flag_counts(q, word_tau, budget)?;
    let mut joined: BTreeMap<Flag, usize> = BTreeMap::new();
    for (v, a) in &left {
        if let Some(b) = right.get(v) {
            joined.insert(v.clone(), a * b);
        }
    }
    let dp = SchubertDatum::new(p.clone(), sigma.clone())?;
    let dq = SchubertDatum::new(q.clone(), tau.clone())?;
    let expected = enumerate_richardson(&dp, &dq, budget)?;
    if expected.len() != joined.len() || expected.iter().any(|v| !joined.contains_key(v)) {
        let bad = expected
            .iter()
            .find(|v| !joined.contains_key(*v))
            .map(|v| format!("missing {v}"))
            .or_else(|| {
                let e: BTreeSet<&Flag> = expected.iter().collect();
                joined.keys().find(|v| !e.contains(v)).map(|v| format!("extra {v}"))
            })
            .unwrap_or_default();
        return Err(Error::ResolutionMismatch(format!("Richardson image: {bad}")));
    }
    let mut fibers = Vec::with_capacity(joined.len());
    for (v, size) in joined {
        let exact = relative_position(p, &v)? == sigma && relative_position(q, &v)? == tau;
        if exact && size != 1 {
            return Err(Error::ResolutionMismatch(format!("fiber of size {size} over exact point {v}")));
        }
        fibers.push(FiberReport {
            target: v,
            fiber_size: size,
            exact_position: exact,
        });
    }
    let qq = p.field().p();
    Ok(RichardsonResolution {
        sigma,
        tau,
        pairs: chain_count(qq, word_sigma.len()) * chain_count(qq, word_tau.len()),
        fibers,
    })
}

/// Every class of chains sharing `F^0 .. F^(j-1)` has exactly `q + 1`
/// distinct values of `F^j`.
pub fn consecutive_fiber_check(chains: &[Chain]) -> bool {
    let Some(first) = chains.first() else {
        return true;
    };
    let q1 = first.flags[0].field().p() as usize + 1;
    let len = first.flags.len();
    for j in 1..len {
        let mut classes: HashMap<&[Flag], BTreeSet<&Flag>> = HashMap::new();
        for c in chains {
            if c.flags.len() != len {
                return false;
            }
            classes.entry(&c.flags[..j]).or_default().insert(&c.flags[j]);
        }
        if classes.values().any(|s| s.len() != q1) {
            return false;
        }
    }
    true
}
