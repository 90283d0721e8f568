//! Schubert cells and varieties, Richardson intersections, and their tangent
//! spaces.
//!
//! Membership follows the degeneracy-locus convention: `V` lies in the
//! Schubert variety of `(F, σ)` when `r(F, V) ≤ σ`, that is when
//! `dim(F_i ∩ V_j) ≥ r_σ(i, j)` for all `i, j`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffgeom::{
    enumerate_flags, is_transverse, rank_table, relative_position, Budget, Flag, RankTable,
};
pub use crate::interp::{point_count_polynomial, PointCountPolynomial};
use crate::perm::{all_permutations, Permutation, RankMatrix};
use crate::tangent::{JacobianSpace, JetRows, TangentReport};

/// A fixed flag together with a permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchubertDatum {
    pub fixed: Flag,
    pub sigma: Permutation,
}

impl SchubertDatum {
    pub fn new(fixed: Flag, sigma: Permutation) -> Result<Self> {
        if fixed.n() != sigma.degree() {
            return Err(Error::DegreeMismatch(fixed.n(), sigma.degree()));
        }
        Ok(Self { fixed, sigma })
    }

    pub fn n(&self) -> usize {
        self.fixed.n()
    }

    fn check(&self, v: &Flag) -> Result<()> {
        if v.n() != self.n() || v.field() != self.fixed.field() {
            return Err(Error::DimensionMismatch(format!(
                "flag over {:?}^{} against datum over {:?}^{}",
                v.field(),
                v.n(),
                self.fixed.field(),
                self.n()
            )));
        }
        Ok(())
    }
}

fn dominates(table: &RankTable, r: &RankMatrix) -> bool {
    let n = table.n();
    (1..=n).all(|i| (1..=n).all(|j| table.get(i, j) >= r.get(i, j)))
}

pub fn schubert_member(v: &Flag, datum: &SchubertDatum) -> Result<bool> {
    datum.check(v)?;
    let table = rank_table(&datum.fixed, v)?;
    Ok(dominates(&table, &datum.sigma.rank_matrix()))
}

pub fn schubert_cell_member(v: &Flag, datum: &SchubertDatum) -> Result<bool> {
    datum.check(v)?;
    Ok(relative_position(&datum.fixed, v)? == datum.sigma)
}

/// Points of the Schubert variety in enumeration order.
pub fn enumerate_schubert(datum: &SchubertDatum, budget: Budget) -> Result<Vec<Flag>> {
    enumerate_filtered(&datum.fixed, budget, |v| schubert_member(v, datum))
}

/// Points of the Schubert cell in enumeration order.
pub fn enumerate_schubert_cell(datum: &SchubertDatum, budget: Budget) -> Result<Vec<Flag>> {
    enumerate_filtered(&datum.fixed, budget, |v| schubert_cell_member(v, datum))
}

/// Points lying in both Schubert varieties. An empty result is not an error.
pub fn enumerate_richardson(
    dp: &SchubertDatum,
    dq: &SchubertDatum,
    budget: Budget,
) -> Result<Vec<Flag>> {
    if dp.n() != dq.n() || dp.fixed.field() != dq.fixed.field() {
        return Err(Error::DimensionMismatch("data over different spaces".into()));
    }
    enumerate_filtered(&dp.fixed, budget, |v| {
        Ok(schubert_member(v, dp)? && schubert_member(v, dq)?)
    })
}

fn enumerate_filtered<F>(like: &Flag, budget: Budget, keep: F) -> Result<Vec<Flag>>
where
    F: Fn(&Flag) -> Result<bool> + Sync,
{
    let all = enumerate_flags(like.n(), like.field(), budget)?;
    let kept: Vec<Option<Flag>> = all
        .into_par_iter()
        .map(|v| keep(&v).map(|k| k.then_some(v)))
        .collect::<Result<_>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// Non-vacuous rank conditions `(i, j, d)`: `dim(F_i ∩ V_j) ≥ d` with
/// `d > max(0, i + j - n)`.
pub fn schubert_conditions(sigma: &Permutation) -> Vec<(usize, usize, usize)> {
    let n = sigma.degree();
    let r = sigma.rank_matrix();
    let mut out = Vec::new();
    for i in 1..n {
        for j in 1..n {
            let d = r.get(i, j) as usize;
            if d > (i + j).saturating_sub(n) {
                out.push((i, j, d));
            }
        }
    }
    out
}

pub fn flag_quotient_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Jacobian row space of the minors cutting out every datum, at the frame
/// lift of `v`.
pub fn schubert_jacobian(v: &Flag, data: &[SchubertDatum]) -> JacobianSpace {
    let n = v.n();
    let mut space = JacobianSpace::new(v.field(), n * n);
    let moving = JetRows::lift(v.basis(), 0);
    for datum in data {
        add_schubert_conditions(&mut space, &JetRows::constant(datum.fixed.basis()), &moving, &datum.sigma);
    }
    space
}

/// Adds the minors of every condition `dim(F_i ∩ V_j) ≥ r_σ(i, j)` to `space`.
pub fn add_schubert_conditions(
    space: &mut JacobianSpace,
    fixed: &JetRows,
    moving: &JetRows,
    sigma: &Permutation,
) {
    for (i, j, d) in schubert_conditions(sigma) {
        space.add_rank_condition(fixed, i, moving, j, i + j - d);
    }
}

/// Zariski tangent dimension at `v` of the intersection of the given
/// Schubert varieties.
pub fn tangent_dimension(v: &Flag, data: &[SchubertDatum]) -> Result<TangentReport<Flag>> {
    for datum in data {
        if !schubert_member(v, datum)? {
            return Err(Error::NotAMember);
        }
    }
    let space = schubert_jacobian(v, data);
    Ok(TangentReport::new(v.clone(), &space, flag_quotient_dim(v.n())))
}

/// Expected local dimensions used to decide whether a tangent space is excessive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedDims {
    pub sigma: usize,
    pub tau: usize,
    pub richardson: usize,
}

impl ExpectedDims {
    /// Cell dimensions `inv σ`, `inv τ`, and `inv σ + inv τ - n(n-1)/2`.
    pub fn from_inversions(sigma: &Permutation, tau: &Permutation) -> Self {
        let n = sigma.degree();
        let a = sigma.inversions();
        let b = tau.inversions();
        Self {
            sigma: a,
            tau: b,
            richardson: (a + b).saturating_sub(n * (n - 1) / 2),
        }
    }
}

/// Singular points of a Richardson set and of both factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothLocusReport {
    pub sigma: Permutation,
    pub tau: Permutation,
    pub expected: ExpectedDims,
    pub points: usize,
    pub singular_sigma: Vec<Flag>,
    pub singular_tau: Vec<Flag>,
    pub singular_richardson: Vec<Flag>,
    /// Points where the union law fails.
    pub violations: Vec<Flag>,
    pub caveat: &'static str,
}

impl SmoothLocusReport {
    /// `singular(R) = singular(X_σ) ∪ singular(X_τ)` at every point.
    pub fn union_law_holds(&self) -> bool {
        self.violations.is_empty()
    }
}

struct PointTangents {
    v: Flag,
    sigma: usize,
    tau: usize,
    richardson: usize,
}

/// Tangent dimensions of `X_σ(P)`, `X_τ(Q)` and their intersection at every
/// point of the Richardson set.
pub fn smooth_locus_check(
    dp: &SchubertDatum,
    dq: &SchubertDatum,
    expected: ExpectedDims,
    budget: Budget,
) -> Result<SmoothLocusReport> {
    if !is_transverse(&dp.fixed, &dq.fixed)? {
        return Err(Error::FlagsNotTransverse);
    }
    let points = enumerate_richardson(dp, dq, budget)?;
    let rows: Vec<PointTangents> = points
        .into_par_iter()
        .map(|v| {
            let a = schubert_jacobian(&v, std::slice::from_ref(dp));
            let b = schubert_jacobian(&v, std::slice::from_ref(dq));
            let quotient = flag_quotient_dim(v.n());
            let t = |s: &JacobianSpace| s.nullity() - quotient;
            PointTangents {
                sigma: t(&a),
                tau: t(&b),
                richardson: t(&a.merged(&b)),
                v,
            }
        })
        .collect();
    Ok(classify(dp.sigma.clone(), dq.sigma.clone(), expected, rows))
}

fn classify(
    sigma: Permutation,
    tau: Permutation,
    expected: ExpectedDims,
    rows: Vec<PointTangents>,
) -> SmoothLocusReport {
    let mut report = SmoothLocusReport {
        sigma,
        tau,
        expected,
        points: rows.len(),
        singular_sigma: Vec::new(),
        singular_tau: Vec::new(),
        singular_richardson: Vec::new(),
        violations: Vec::new(),
        caveat: crate::tangent::GENERATOR_CAVEAT,
    };
    for row in rows {
        let s = row.sigma > expected.sigma;
        let t = row.tau > expected.tau;
        let r = row.richardson > expected.richardson;
        if s {
            report.singular_sigma.push(row.v.clone());
        }
        if t {
            report.singular_tau.push(row.v.clone());
        }
        if r {
            report.singular_richardson.push(row.v.clone());
        }
        if r != (s || t) {
            report.violations.push(row.v);
        }
    }
    report
}

/// σ index, τ index, tangent of X_σ, of X_τ, of the intersection.
type SurveyRow = (usize, usize, usize, usize, usize);

/// [`smooth_locus_check`] for every pair `(σ, τ)` with a nonempty Richardson
/// set, sharing one enumeration and one Jacobian per `(point, permutation)`.
/// Expected dimensions come from `expected(σ, τ)`.
pub fn smooth_locus_survey<E>(
    p: &Flag,
    q: &Flag,
    expected: E,
    budget: Budget,
) -> Result<Vec<SmoothLocusReport>>
where
    E: Fn(&Permutation, &Permutation) -> ExpectedDims,
{
    if !is_transverse(p, q)? {
        return Err(Error::FlagsNotTransverse);
    }
    let n = p.n();
    let perms = all_permutations(n)?;
    let flags = enumerate_flags(n, p.field(), budget)?;
    let quotient = flag_quotient_dim(n);
    let per_flag: Vec<Vec<SurveyRow>> = flags
        .par_iter()
        .map(|v| -> Result<_> {
            let a = relative_position(p, v)?;
            let b = relative_position(q, v)?;
            let above = |x: &Permutation, fixed: &Flag| -> Result<Vec<(usize, JacobianSpace)>> {
                let mut out = Vec::new();
                for (k, s) in perms.iter().enumerate() {
                    if x.bruhat_leq(s)? {
                        let datum = SchubertDatum::new(fixed.clone(), s.clone())?;
                        out.push((k, schubert_jacobian(v, &[datum])));
                    }
                }
                Ok(out)
            };
            let left = above(&a, p)?;
            let right = above(&b, q)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for (ks, js) in &left {
                for (kt, jt) in &right {
                    let jr = js.merged(jt);
                    out.push((
                        *ks,
                        *kt,
                        js.nullity() - quotient,
                        jt.nullity() - quotient,
                        jr.nullity() - quotient,
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut grouped: BTreeMap<(usize, usize), Vec<PointTangents>> = BTreeMap::new();
    for (v, rows) in flags.iter().zip(per_flag) {
        for (ks, kt, sigma, tau, richardson) in rows {
            grouped.entry((ks, kt)).or_default().push(PointTangents {
                v: v.clone(),
                sigma,
                tau,
                richardson,
            });
        }
    }
    Ok(grouped
        .into_iter()
        .map(|((ks, kt), rows)| {
            let (s, t) = (&perms[ks], &perms[kt]);
            classify(s.clone(), t.clone(), expected(s, t), rows)
        })
        .collect())
}

/// Number of `F_q`-points of the Schubert variety for every permutation,
/// from one pass over the flag variety.
pub fn schubert_counts(fixed: &Flag, budget: Budget) -> Result<BTreeMap<Permutation, u128>> {
    let n = fixed.n();
    let perms = all_permutations(n)?;
    let hist = position_histogram(fixed, budget)?;
    let mut out = BTreeMap::new();
    for s in &perms {
        let mut total = 0u128;
        for (a, &c) in &hist {
            if a.bruhat_leq(s)? {
                total += c;
            }
        }
        out.insert(s.clone(), total);
    }
    Ok(out)
}

/// Number of flags in each relative position to `fixed`.
pub fn position_histogram(fixed: &Flag, budget: Budget) -> Result<BTreeMap<Permutation, u128>> {
    let n = fixed.n();
    let hist = crate::ffgeom::par_fold_flags(
        n,
        fixed.field(),
        budget,
        BTreeMap::<Permutation, u128>::new,
        |mut acc, v| {
            if let Ok(a) = relative_position(fixed, &v) {
                *acc.entry(a).or_default() += 1;
            }
            acc
        },
        merge_counts,
    )?;
    Ok(hist)
}

fn merge_counts<K: Ord>(mut a: BTreeMap<K, u128>, b: BTreeMap<K, u128>) -> BTreeMap<K, u128> {
    for (k, c) in b {
        *a.entry(k).or_default() += c;
    }
    a
}

/// Number of `F_q`-points of every Richardson set `X_σ(P) ∩ X_τ(Q)`, from
/// one pass over the flag variety. Pairs with no points are omitted.
pub fn richardson_counts(
    p: &Flag,
    q: &Flag,
    budget: Budget,
) -> Result<BTreeMap<(Permutation, Permutation), u128>> {
    let n = p.n();
    let perms = all_permutations(n)?;
    let hist = crate::ffgeom::par_fold_flags(
        n,
        p.field(),
        budget,
        BTreeMap::<(Permutation, Permutation), u128>::new,
        |mut acc, v| {
            if let (Ok(a), Ok(b)) = (relative_position(p, &v), relative_position(q, &v)) {
                *acc.entry((a, b)).or_default() += 1;
            }
            acc
        },
        merge_counts,
    )?;
    // lower sets, as lists of indices into `perms`
    let mut below: BTreeMap<Permutation, Vec<bool>> = BTreeMap::new();
    for x in hist.keys().flat_map(|(a, b)| [a, b]) {
        if !below.contains_key(x) {
            let row = perms.iter().map(|s| x.bruhat_leq(s)).collect::<Result<_>>()?;
            below.insert(x.clone(), row);
        }
    }
    let mut out = BTreeMap::new();
    for ((a, b), c) in &hist {
        let (ra, rb) = (&below[a], &below[b]);
        for (ks, s) in perms.iter().enumerate() {
            if !ra[ks] {
                continue;
            }
            for (kt, t) in perms.iter().enumerate() {
                if rb[kt] {
                    *out.entry((s.clone(), t.clone())).or_default() += *c;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgeom::{opposite_flag, standard_flag, PrimeField};
    use crate::perm::bruhat_lower_set;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn trivial_memberships() {
        let field = f(3);
        let fl = standard_flag(4, field);
        for s in all_permutations(4).unwrap() {
            let d = SchubertDatum::new(fl.clone(), s).unwrap();
            assert!(schubert_member(&fl, &d).unwrap());
        }
        let top = SchubertDatum::new(fl.clone(), Permutation::longest(4).unwrap()).unwrap();
        let id = SchubertDatum::new(fl.clone(), Permutation::identity(4).unwrap()).unwrap();
        assert_eq!(enumerate_schubert(&id, Budget::default()).unwrap(), vec![fl.clone()]);
        assert!(schubert_member(&opposite_flag(4, field), &top).unwrap());
    }

    #[test]
    fn count_2143_over_f2() {
        let d = SchubertDatum::new(standard_flag(4, f(2)), perm("2143")).unwrap();
        let pts = enumerate_schubert(&d, Budget::default()).unwrap();
        assert_eq!(pts.len(), 9);
        let oracle: u128 = bruhat_lower_set(&perm("2143"))
            .unwrap()
            .iter()
            .map(|t| 2u128.pow(t.inversions() as u32))
            .sum();
        assert_eq!(oracle, 9);
    }

    #[test]
    fn histogram_counts_match_enumeration() {
        let fl = standard_flag(4, f(2));
        let counts = schubert_counts(&fl, Budget::default()).unwrap();
        for (s, c) in &counts {
            let d = SchubertDatum::new(fl.clone(), s.clone()).unwrap();
            assert_eq!(*c as usize, enumerate_schubert(&d, Budget::default()).unwrap().len());
        }
    }

    #[test]
    fn tangent_at_base_flag_of_4231() {
        let fl = standard_flag(4, f(5));
        let d = SchubertDatum::new(fl.clone(), perm("4231")).unwrap();
        let rep = tangent_dimension(&fl, &[d]).unwrap();
        assert_eq!(rep.tangent_dim, 6);
        assert!(rep.is_singular(5));
        let oracle = (1..=4)
            .flat_map(|i| (i + 1..=4).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                Permutation::transposition(4, i, j)
                    .unwrap()
                    .bruhat_leq(&perm("4231"))
                    .unwrap()
            })
            .count();
        assert_eq!(oracle, 6);
    }

    #[test]
    fn tangent_of_whole_flag_variety() {
        let fl = standard_flag(4, f(3));
        let d = SchubertDatum::new(fl.clone(), Permutation::longest(4).unwrap()).unwrap();
        assert_eq!(tangent_dimension(&fl, &[d]).unwrap().tangent_dim, 6);
    }

    #[test]
    fn non_member_is_rejected() {
        let field = f(2);
        let d = SchubertDatum::new(standard_flag(3, field), Permutation::identity(3).unwrap()).unwrap();
        assert_eq!(
            tangent_dimension(&opposite_flag(3, field), &[d]),
            Err(Error::NotAMember)
        );
    }

    #[test]
    fn smooth_locus_of_4231_against_everything() {
        let field = f(3);
        let p = standard_flag(4, field);
        let q = opposite_flag(4, field);
        let s = perm("4231");
        let w = Permutation::longest(4).unwrap();
        let dp = SchubertDatum::new(p, s.clone()).unwrap();
        let dq = SchubertDatum::new(q, w.clone()).unwrap();
        let rep = smooth_locus_check(&dp, &dq, ExpectedDims::from_inversions(&s, &w), Budget::default())
            .unwrap();
        assert!(rep.union_law_holds());
        assert!(!rep.singular_sigma.is_empty());
        assert_eq!(rep.singular_richardson, rep.singular_sigma);
        assert!(rep.singular_tau.is_empty());
    }
}
