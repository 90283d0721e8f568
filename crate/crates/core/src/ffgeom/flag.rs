use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::matrix::{Echelon, Matrix};
use crate::error::{Error, Result};
use crate::perm::{all_permutations, Permutation, RankMatrix, MAX_DEGREE};

/// Cap on the number of objects a single enumeration may produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(10_000_000)
    }
}

impl Budget {
    pub fn check(self, requested: u128) -> Result<()> {
        if requested > self.0 as u128 {
            Err(Error::EnumerationBudgetExceeded {
                requested,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// A complete flag, stored as its canonical basis: row `i` has a leading 1,
/// vanishes at the pivot columns of rows above it, and the `i`-dimensional
/// piece is the span of the first `i` rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    basis: Matrix,
}

impl Flag {
    /// Canonical representative of the flag spanned by prefixes of the rows of `m`.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "flag basis must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let mut e = Echelon::new(m.field(), m.cols());
        for i in 0..m.rows() {
            if !e.insert(m.row(i)) {
                return Err(Error::SingularMatrix);
            }
        }
        Ok(Self {
            basis: e.into_matrix(),
        })
    }

    pub(crate) fn from_canonical(basis: Matrix) -> Self {
        Self { basis }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Basis of the `i`-dimensional piece.
    pub fn piece(&self, i: usize) -> Matrix {
        self.basis.top_rows(i)
    }

    /// Pivot column of each row (0-indexed).
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.n())
            .map(|i| self.basis.row(i).iter().position(|&v| v != 0).unwrap())
            .collect()
    }

    pub fn to_json(&self) -> FlagJson {
        FlagJson {
            p: self.field().p(),
            n: self.n(),
            rows: self
                .basis
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag{:?}", self.basis.to_rows())
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// On-disk flag form: basis vectors as rows; canonicalized on load.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlagJson {
    pub p: u32,
    pub n: usize,
    pub rows: Vec<Vec<i64>>,
}

impl FlagJson {
    pub fn to_flag(&self) -> Result<Flag> {
        let field = PrimeField::new(self.p)?;
        if self.rows.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows, got {}",
                self.n,
                self.rows.len()
            )));
        }
        canonical_flag(&Matrix::from_rows(field, &self.rows)?)
    }
}

pub fn canonical_flag(m: &Matrix) -> Result<Flag> {
    Flag::from_matrix(m)
}

/// `F_i = span(e_1..e_i)`.
pub fn standard_flag(n: usize, field: PrimeField) -> Flag {
    Flag::from_canonical(Matrix::identity(field, n))
}

/// `F_i = span(e_n..e_{n-i+1})`.
pub fn opposite_flag(n: usize, field: PrimeField) -> Flag {
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        m.set(i, n - 1 - i, 1);
    }
    Flag::from_canonical(m)
}

pub fn random_invertible<R: Rng>(n: usize, field: PrimeField, rng: &mut R) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..field.p())).collect();
        let m = Matrix::from_data(field, n, n, data).expect("sizes agree");
        if m.is_invertible() {
            return m;
        }
    }
}

pub fn random_flag_with<R: Rng>(n: usize, field: PrimeField, rng: &mut R) -> Flag {
    Flag::from_matrix(&random_invertible(n, field, rng)).expect("invertible by construction")
}

/// Seed-deterministic random flag.
pub fn random_flag(n: usize, field: PrimeField, seed: u64) -> Flag {
    random_flag_with(n, field, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// One Schubert cell of the canonical-form enumeration: fixed pivot columns,
/// free entries at the listed positions.
#[derive(Clone, Debug)]
struct Cell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    size: u64,
}

impl Cell {
    fn new(pivots: Vec<usize>, q: u64) -> Self {
        let n = pivots.len();
        let mut free = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..n {
                if !pivots[..i].contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let size = q.pow(free.len() as u32);
        Self { pivots, free, size }
    }

    fn decode(&self, field: PrimeField, mut t: u64) -> Flag {
        let n = self.pivots.len();
        let q = field.p() as u64;
        let mut m = Matrix::zeros(field, n, n);
        for (i, &pc) in self.pivots.iter().enumerate() {
            m.set(i, pc, 1);
        }
        // first free position is the most significant digit
        for &(i, c) in self.free.iter().rev() {
            m.set(i, c, (t % q) as u32);
            t /= q;
        }
        Flag::from_canonical(m)
    }
}

fn flag_cells(n: usize, field: PrimeField) -> Result<Vec<Cell>> {
    Ok(all_permutations(n)?
        .into_iter()
        .map(|w| Cell::new(w.images().into_iter().map(|v| v - 1).collect(), field.p() as u64))
        .collect())
}

/// `[n]_q! = prod_{i=1}^{n} (1 + q + ... + q^{i-1})`.
pub fn flag_count(n: usize, q: u64) -> u128 {
    let q = q as u128;
    (1..=n as u32)
        .map(|i| (0..i).map(|e| q.pow(e)).sum::<u128>())
        .product()
}

/// Every complete flag of `F_p^n`, ordered by pivot permutation and then
/// lexicographically by free entries.
pub fn enumerate_flags(n: usize, field: PrimeField, budget: Budget) -> Result<Vec<Flag>> {
    budget.check(flag_count(n, field.p() as u64))?;
    let cells = flag_cells(n, field)?;
    Ok(cells
        .iter()
        .flat_map(|c| (0..c.size).map(move |t| c.decode(field, t)))
        .collect())
}

/// Parallel fold over all flags without materializing them.
pub fn par_fold_flags<T, ID, FOLD, RED>(
    n: usize,
    field: PrimeField,
    budget: Budget,
    identity: ID,
    fold: FOLD,
    reduce: RED,
) -> Result<T>
where
    T: Send,
    ID: Fn() -> T + Sync + Send,
    FOLD: Fn(T, Flag) -> T + Sync + Send,
    RED: Fn(T, T) -> T + Sync + Send,
{
    budget.check(flag_count(n, field.p() as u64))?;
    let cells = flag_cells(n, field)?;
    Ok(cells
        .par_iter()
        .flat_map(|c| (0..c.size).into_par_iter().map(move |t| c.decode(field, t)))
        .fold(&identity, &fold)
        .reduce(&identity, &reduce))
}

/// `d(i, j) = dim(P_i ∩ Q_j)` for `0 <= i, j <= n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RankTable {
    n: usize,
    entries: Vec<u32>,
}

impl RankTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * (self.n + 1) + j]
    }

    pub fn to_rank_matrix(&self) -> RankMatrix {
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                e.push(self.get(i, j));
            }
        }
        RankMatrix::from_entries(n, e)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n + 1).map(|c| c.to_vec()).collect()
    }
}

/// Fixed-capacity echelon basis for the rank-table inner loop.
#[derive(Clone, Copy)]
struct SmallEchelon {
    rows: [[u32; MAX_DEGREE]; MAX_DEGREE],
    pivots: [usize; MAX_DEGREE],
    len: usize,
}

impl SmallEchelon {
    fn new() -> Self {
        Self {
            rows: [[0; MAX_DEGREE]; MAX_DEGREE],
            pivots: [0; MAX_DEGREE],
            len: 0,
        }
    }

    fn insert(&mut self, f: PrimeField, v: &[u32]) -> bool {
        let n = v.len();
        let mut w = [0u32; MAX_DEGREE];
        w[..n].copy_from_slice(v);
        for k in 0..self.len {
            let pc = self.pivots[k];
            let factor = w[pc];
            if factor != 0 {
                for (x, &r) in w[pc..n].iter_mut().zip(&self.rows[k][pc..n]) {
                    *x = f.sub(*x, f.mul(factor, r));
                }
            }
        }
        let Some(pc) = w[..n].iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w[..n].iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows[self.len] = w;
        self.pivots[self.len] = pc;
        self.len += 1;
        true
    }
}

fn check_pair(p: &Flag, q: &Flag) -> Result<()> {
    if p.n() != q.n() || p.field() != q.field() {
        Err(Error::DimensionMismatch(format!(
            "flags over {:?}^{} and {:?}^{}",
            p.field(),
            p.n(),
            q.field(),
            q.n()
        )))
    } else {
        Ok(())
    }
}

/// Intersection dimensions via `d(i, j) = i + j - rank(P_i ; Q_j)`.
pub fn rank_table(p: &Flag, q: &Flag) -> Result<RankTable> {
    check_pair(p, q)?;
    let n = p.n();
    let f = p.field();
    let mut entries = vec![0u32; (n + 1) * (n + 1)];
    let mut base = SmallEchelon::new();
    for i in 0..=n {
        if i > 0 {
            base.insert(f, p.basis.row(i - 1));
        }
        let mut e = base;
        let mut independent = 0;
        for j in 1..=n {
            if e.insert(f, q.basis.row(j - 1)) {
                independent += 1;
            }
            entries[i * (n + 1) + j] = (j - independent) as u32;
        }
    }
    Ok(RankTable { n, entries })
}

/// The permutation `sigma` with `#{m <= i : sigma(m) <= j} = dim(P_i ∩ Q_j)`.
pub fn relative_position(p: &Flag, q: &Flag) -> Result<Permutation> {
    let table = rank_table(p, q)?;
    table.to_rank_matrix().to_permutation().map_err(|e| {
        Error::InternalInvariantViolation(format!("rank table is not a rank matrix: {e}"))
    })
}

/// A basis `b_1..b_n` with `b_i ∈ (P_i \ P_{i-1}) ∩ (Q_σ(i) \ Q_σ(i)-1)`, `σ = r(P, Q)`.
pub fn common_basis(p: &Flag, q: &Flag) -> Result<Vec<Vec<u32>>> {
    let sigma = relative_position(p, q)?;
    let n = p.n();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let j = sigma.apply(i);
        let w = p.piece(i).row_space_intersection(&q.piece(j))?;
        let pp = p.piece(i - 1);
        let qq = q.piece(j - 1);
        let outside = |v: &[u32]| !pp.row_space_contains(v) && !qq.row_space_contains(v);
        let rows = w.to_rows();
        let found = rows.iter().find(|v| outside(v)).cloned().or_else(|| {
            // a space is never the union of two proper subspaces: some x ∉ P_{i-1}
            // and some y ∉ Q_{j-1} exist, and x + y avoids both
            let x = rows.iter().find(|v| !pp.row_space_contains(v))?;
            let y = rows.iter().find(|v| !qq.row_space_contains(v))?;
            let f = p.field();
            let s: Vec<u32> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
            outside(&s).then_some(s)
        });
        match found {
            Some(v) => out.push(v),
            None => {
                return Err(Error::InternalInvariantViolation(format!(
                    "no common-basis witness at i = {i}"
                )))
            }
        }
    }
    Ok(out)
}

/// `dim P_i ∩ Q_{n-i} = 0` for all `i` in `1..n`.
pub fn is_transverse(p: &Flag, q: &Flag) -> Result<bool> {
    let t = rank_table(p, q)?;
    let n = p.n();
    Ok((1..n).all(|i| t.get(i, n - i) == 0))
}

/// The unique `t` with `dim P_t ∩ Q_{n-t} = 1` and all other complementary
/// intersections zero.
pub fn is_almost_transverse(p: &Flag, q: &Flag) -> Result<Option<usize>> {
    let t = rank_table(p, q)?;
    Ok(almost_transverse_index(&t))
}

pub(crate) fn almost_transverse_index(t: &RankTable) -> Option<usize> {
    let n = t.n();
    let mut found = None;
    for i in 1..n {
        match t.get(i, n - i) {
            0 => {}
            1 if found.is_none() => found = Some(i),
            _ => return None,
        }
    }
    found
}
