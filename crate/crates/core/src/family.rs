//! One-parameter families of flag pairs over the affine line `A^1(F_p)`.
//!
//! A family gives two flags `P(s), Q(s)` for every base point `s`, as
//! matrices of polynomials in `s`. Total spaces of relative Schubert and
//! Richardson conditions are enumerated fiber by fiber, and their tangent
//! spaces are computed in the lift coordinates together with `s`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffgeom::{
    almost_transverse_index, rank_table, Budget, Flag, Matrix, PrimeField, RankTable,
};
use crate::grass::{
    add_grass_conditions, enumerate_grassmannian, grass_quotient_dim, grass_schubert_member,
    AdmissiblePartition, GrassPoint,
};
use crate::perm::Permutation;
use crate::schubert::{add_schubert_conditions, enumerate_richardson, flag_quotient_dim, schubert_member, SchubertDatum};
use crate::tangent::{JacobianSpace, JetRows, TangentReport};

pub const MAX_POLY_DEGREE: usize = 2;

pub const PROFILE_CAVEAT: &str = "versality is approximated by the fiberwise relative-position profile \
(profile-only); smoothness of the frame-bundle map is not checked";

/// A polynomial in `s`, coefficients lowest degree first.
pub type Poly = Vec<u32>;

fn eval(field: PrimeField, poly: &[u32], s: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, s), c))
}

fn derivative_at(field: PrimeField, poly: &[u32], s: u32) -> u32 {
    let mut acc = 0;
    let mut power = 1;
    for (k, &c) in poly.iter().enumerate().skip(1) {
        let term = field.mul(field.mul(c, (k as u32) % field.p()), power);
        acc = field.add(acc, term);
        power = field.mul(power, s);
    }
    acc
}

/// Two `n x n` matrices of polynomials over `F_p`, invertible at every `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFamily {
    field: PrimeField,
    n: usize,
    p_rows: Vec<Vec<Poly>>,
    q_rows: Vec<Vec<Poly>>,
}

/// JSON form `{"p", "n", "P", "Q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "P")]
    pub p_rows: Vec<Vec<Vec<i64>>>,
    #[serde(rename = "Q")]
    pub q_rows: Vec<Vec<Vec<i64>>>,
}

impl PolynomialFamily {
    pub fn new(field: PrimeField, n: usize, p_rows: Vec<Vec<Poly>>, q_rows: Vec<Vec<Poly>>) -> Result<Self> {
        for rows in [&p_rows, &q_rows] {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch(format!("family matrices must be {n}x{n}")));
            }
            for poly in rows.iter().flatten() {
                if poly.len() > MAX_POLY_DEGREE + 1 {
                    return Err(Error::OutOfBounds(format!(
                        "polynomial degree {} exceeds {MAX_POLY_DEGREE}",
                        poly.len() - 1
                    )));
                }
                if poly.iter().any(|&c| c >= field.p()) {
                    return Err(Error::OutOfBounds(format!("coefficient not reduced mod {}", field.p())));
                }
            }
        }
        let fam = Self {
            field,
            n,
            p_rows,
            q_rows,
        };
        for s in fam.base() {
            let (a, b) = fam.specialize(s);
            if !a.is_invertible() || !b.is_invertible() {
                return Err(Error::SingularFiber(s));
            }
        }
        Ok(fam)
    }

    /// A family that does not depend on `s`.
    pub fn constant(p: &Matrix, q: &Matrix) -> Result<Self> {
        let lift = |m: &Matrix| -> Vec<Vec<Poly>> {
            m.to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| vec![v]).collect())
                .collect()
        };
        Self::new(p.field(), p.rows(), lift(p), lift(q))
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        let conv = |rows: &Vec<Vec<Vec<i64>>>| -> Vec<Vec<Poly>> {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|poly| poly.iter().map(|&c| field.reduce(c)).collect())
                        .collect()
                })
                .collect()
        };
        Self::new(field, j.n, conv(&j.p_rows), conv(&j.q_rows))
    }

    pub fn to_json(&self) -> FamilyJson {
        let conv = |rows: &Vec<Vec<Poly>>| -> Vec<Vec<Vec<i64>>> {
            rows.iter()
                .map(|r| r.iter().map(|poly| poly.iter().map(|&c| c as i64).collect()).collect())
                .collect()
        };
        FamilyJson {
            p: self.field.p(),
            n: self.n,
            p_rows: conv(&self.p_rows),
            q_rows: conv(&self.q_rows),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The base points `0..p`.
    pub fn base(&self) -> std::ops::Range<u32> {
        0..self.field.p()
    }

    fn map_rows(&self, rows: &[Vec<Poly>], f: impl Fn(&[u32]) -> u32) -> Matrix {
        let data = rows.iter().flatten().map(|poly| f(poly)).collect();
        Matrix::from_data(self.field, self.n, self.n, data).expect("square by construction")
    }

    /// `(P(s), Q(s))` as matrices.
    pub fn specialize(&self, s: u32) -> (Matrix, Matrix) {
        let f = self.field;
        (
            self.map_rows(&self.p_rows, |poly| eval(f, poly, s)),
            self.map_rows(&self.q_rows, |poly| eval(f, poly, s)),
        )
    }

    /// `(P'(s), Q'(s))`.
    pub fn derivative(&self, s: u32) -> (Matrix, Matrix) {
        let f = self.field;
        (
            self.map_rows(&self.p_rows, |poly| derivative_at(f, poly, s)),
            self.map_rows(&self.q_rows, |poly| derivative_at(f, poly, s)),
        )
    }

    /// Canonical flags at `s`.
    pub fn flags(&self, s: u32) -> (Flag, Flag) {
        let (a, b) = self.specialize(s);
        (
            Flag::from_matrix(&a).expect("invertible at every base point"),
            Flag::from_matrix(&b).expect("invertible at every base point"),
        )
    }
}

/// Transversality class of one fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FiberClass {
    Transverse,
    AlmostTransverse { t: usize },
    Other,
}

fn classify(table: &RankTable) -> FiberClass {
    let n = table.n();
    if (1..n).all(|i| table.get(i, n - i) == 0) {
        FiberClass::Transverse
    } else if let Some(t) = almost_transverse_index(table) {
        FiberClass::AlmostTransverse { t }
    } else {
        FiberClass::Other
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberProfile {
    pub s: u32,
    pub relative_position: Permutation,
    #[serde(flatten)]
    pub class: FiberClass,
}

/// Relative position and transversality class at every base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub fibers: Vec<FiberProfile>,
}

impl ProfileReport {
    /// Almost transverse with index `t` at `s = 0` and transverse elsewhere.
    pub fn matches_demo_pattern(&self, t: usize) -> bool {
        self.fibers.iter().all(|f| match f.s {
            0 => f.class == FiberClass::AlmostTransverse { t },
            _ => f.class == FiberClass::Transverse,
        })
    }

    /// Every fiber transverse or almost transverse.
    pub fn is_versal_pattern(&self) -> bool {
        self.fibers.iter().all(|f| f.class != FiberClass::Other)
    }
}

pub fn relpos_profile(fam: &PolynomialFamily) -> Result<ProfileReport> {
    let mut fibers = Vec::new();
    for s in fam.base() {
        let (p, q) = fam.flags(s);
        let table = rank_table(&p, &q)?;
        let relative_position = table.to_rank_matrix().to_permutation()?;
        fibers.push(FiberProfile {
            s,
            relative_position,
            class: classify(&table),
        });
    }
    Ok(ProfileReport { fibers })
}

fn unit(n: usize, k: usize) -> Vec<Poly> {
    (0..n).map(|c| if c == k { vec![1] } else { vec![0] }).collect()
}

/// `P(s)` standard; `Q(s)` the opposite flag with rows `n-t` and `n-t+1`
/// (1-indexed) replaced by `e_t + s e_{t+1}` and `e_{t+1}`. Transverse for
/// `s ≠ 0` and almost transverse with index `t` at `s = 0`. For `n = 4`,
/// `t = 2` the rows of `Q(s)` are `e_4, e_2 + s e_3, e_3, e_1`.
pub fn demo_family(n: usize, field: PrimeField, t: usize) -> Result<PolynomialFamily> {
    if n < 2 || t == 0 || t >= n {
        return Err(Error::IndexOutOfRange { index: t, n });
    }
    let p_rows = (0..n).map(|k| unit(n, k)).collect();
    let mut q_rows: Vec<Vec<Poly>> = (0..n).map(|k| unit(n, n - 1 - k)).collect();
    // 0-indexed rows n-t-1 and n-t; basis vectors e_t, e_{t+1} are columns t-1, t
    let mut moving = unit(n, t - 1);
    moving[t] = vec![0, 1];
    q_rows[n - t - 1] = moving;
    q_rows[n - t] = unit(n, t);
    let fam = PolynomialFamily::new(field, n, p_rows, q_rows)?;
    if !relpos_profile(&fam)?.matches_demo_pattern(t) {
        return Err(Error::InternalInvariantViolation("demo family profile".into()));
    }
    Ok(fam)
}

pub const DEFAULT_SEARCH_ATTEMPTS: usize = 100_000;

/// Random degree-one pencils `A + sB`, `C + sD` until one is almost
/// transverse with index `i` at `s = 0` and transverse elsewhere.
pub fn search_family(
    n: usize,
    field: PrimeField,
    i: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<PolynomialFamily> {
    if n < 2 || i == 0 || i >= n {
        return Err(Error::NotFound(format!("no almost-transverse index {i} in dimension {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.p();
    let pencil = |rng: &mut ChaCha8Rng| -> Vec<Vec<Poly>> {
        (0..n)
            .map(|_| (0..n).map(|_| vec![rng.gen_range(0..p), rng.gen_range(0..p)]).collect())
            .collect()
    };
    for _ in 0..max_attempts {
        let a = pencil(&mut rng);
        let b = pencil(&mut rng);
        let Ok(fam) = PolynomialFamily::new(field, n, a, b) else {
            continue;
        };
        if relpos_profile(&fam)?.matches_demo_pattern(i) {
            return Ok(fam);
        }
    }
    Err(Error::NotFound(format!("{max_attempts} pencils tried")))
}

/// Fiberwise conditions defining a total space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conditions {
    /// `V ∈ X_σ(P(s)) ∩ X_τ(Q(s))` in the flag variety.
    Flag { sigma: Permutation, tau: Permutation },
    /// `V ∈ X_λ(P(s)) ∩ X_λ'(Q(s))` in `Gr(r, n)`.
    Grass {
        lambda: AdmissiblePartition,
        lambda2: AdmissiblePartition,
    },
}

impl Conditions {
    fn check(&self, fam: &PolynomialFamily) -> Result<()> {
        let n = fam.n();
        let ok = match self {
            Conditions::Flag { sigma, tau } => sigma.degree() == n && tau.degree() == n,
            Conditions::Grass { lambda, lambda2 } => {
                lambda.n() == n && lambda2.n() == n && lambda.r() == lambda2.r()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("conditions do not fit a family in dimension {n}")))
        }
    }

    /// Base dimension plus the expected fiber dimensions of the intersection
    /// and of each factor.
    pub fn expected_dims(&self, n: usize) -> FamilyExpected {
        match self {
            Conditions::Flag { sigma, tau } => {
                let (a, b) = (sigma.inversions(), tau.inversions());
                FamilyExpected {
                    total: 1 + (a + b).saturating_sub(n * (n - 1) / 2),
                    first: 1 + a,
                    second: 1 + b,
                }
            }
            Conditions::Grass { lambda, lambda2 } => {
                let g = lambda.r() * (n - lambda.r());
                FamilyExpected {
                    total: 1 + g.saturating_sub(lambda.size() + lambda2.size()),
                    first: 1 + g - lambda.size(),
                    second: 1 + g - lambda2.size(),
                }
            }
        }
    }
}

/// Expected local dimensions of a total space and of its two factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyExpected {
    pub total: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "point", rename_all = "snake_case")]
pub enum FamilyPoint {
    Flag(Flag),
    Grass(GrassPoint),
}

impl FamilyPoint {
    fn basis(&self) -> &Matrix {
        match self {
            FamilyPoint::Flag(f) => f.basis(),
            FamilyPoint::Grass(g) => g.basis(),
        }
    }
}

/// A point `(s, V)` of a total space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TotalSpacePoint {
    pub s: u32,
    pub v: FamilyPoint,
}

fn fiber_points(fam: &PolynomialFamily, cond: &Conditions, s: u32, budget: Budget) -> Result<Vec<FamilyPoint>> {
    let (p, q) = fam.flags(s);
    match cond {
        Conditions::Flag { sigma, tau } => {
            let dp = SchubertDatum::new(p, sigma.clone())?;
            let dq = SchubertDatum::new(q, tau.clone())?;
            Ok(enumerate_richardson(&dp, &dq, budget)?
                .into_iter()
                .map(FamilyPoint::Flag)
                .collect())
        }
        Conditions::Grass { lambda, lambda2 } => {
            let mut out = Vec::new();
            for v in enumerate_grassmannian(fam.n(), lambda.r(), fam.field(), budget)? {
                if grass_schubert_member(&v, &p, lambda)? && grass_schubert_member(&v, &q, lambda2)? {
                    out.push(FamilyPoint::Grass(v));
                }
            }
            Ok(out)
        }
    }
}

/// All `(s, V)` with `V` satisfying the conditions in the fiber over `s`.
pub fn enumerate_total_space(
    fam: &PolynomialFamily,
    cond: &Conditions,
    budget: Budget,
) -> Result<Vec<TotalSpacePoint>> {
    cond.check(fam)?;
    let per_s: Vec<Vec<TotalSpacePoint>> = fam
        .base()
        .into_par_iter()
        .map(|s| {
            Ok(fiber_points(fam, cond, s, budget)?
                .into_iter()
                .map(|v| TotalSpacePoint { s, v })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_s.into_iter().flatten().collect())
}

fn member(pt: &TotalSpacePoint, fam: &PolynomialFamily, cond: &Conditions) -> Result<bool> {
    let (p, q) = fam.flags(pt.s);
    match (cond, &pt.v) {
        (Conditions::Flag { sigma, tau }, FamilyPoint::Flag(v)) => Ok(schubert_member(
            v,
            &SchubertDatum::new(p, sigma.clone())?,
        )? && schubert_member(v, &SchubertDatum::new(q, tau.clone())?)?),
        (Conditions::Grass { lambda, lambda2 }, FamilyPoint::Grass(v)) => {
            Ok(grass_schubert_member(v, &p, lambda)? && grass_schubert_member(v, &q, lambda2)?)
        }
        _ => Err(Error::DimensionMismatch("point kind does not match the conditions".into())),
    }
}

/// Which factors contribute minors.
#[derive(Clone, Copy)]
struct Factors {
    first: bool,
    second: bool,
}

fn total_jacobian(pt: &TotalSpacePoint, fam: &PolynomialFamily, cond: &Conditions, which: Factors) -> (JacobianSpace, usize) {
    let basis = pt.v.basis();
    let lift_vars = basis.rows() * basis.cols();
    let s_var = lift_vars;
    let mut space = JacobianSpace::new(fam.field(), lift_vars + 1);
    let moving = JetRows::lift(basis, 0);
    let (pv, qv) = fam.specialize(pt.s);
    let (pd, qd) = fam.derivative(pt.s);
    let p_rows = JetRows::with_derivative(&pv, &pd, s_var);
    let q_rows = JetRows::with_derivative(&qv, &qd, s_var);
    let quotient = match cond {
        Conditions::Flag { sigma, tau } => {
            if which.first {
                add_schubert_conditions(&mut space, &p_rows, &moving, sigma);
            }
            if which.second {
                add_schubert_conditions(&mut space, &q_rows, &moving, tau);
            }
            flag_quotient_dim(fam.n())
        }
        Conditions::Grass { lambda, lambda2 } => {
            if which.first {
                add_grass_conditions(&mut space, &p_rows, &moving, lambda);
            }
            if which.second {
                add_grass_conditions(&mut space, &q_rows, &moving, lambda2);
            }
            grass_quotient_dim(lambda.r())
        }
    };
    (space, quotient)
}

/// Tangent dimension of the total space at `pt`, in the lift coordinates and `s`.
pub fn total_tangent_dimension(
    pt: &TotalSpacePoint,
    fam: &PolynomialFamily,
    cond: &Conditions,
) -> Result<TangentReport<TotalSpacePoint>> {
    cond.check(fam)?;
    if !member(pt, fam, cond)? {
        return Err(Error::NotAMember);
    }
    let both = Factors {
        first: true,
        second: true,
    };
    let (space, quotient) = total_jacobian(pt, fam, cond, both);
    Ok(TangentReport::new(pt.clone(), &space, quotient))
}

/// Tangent dimensions at one total-space point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointTangents {
    pub point: TotalSpacePoint,
    pub total: usize,
    pub first: usize,
    pub second: usize,
}

/// Singular points of a total space and of both factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularLocusReport {
    pub conditions: Conditions,
    pub expected: FamilyExpected,
    pub profile: ProfileReport,
    pub versal_pattern: bool,
    /// Number of total-space points over each base point.
    pub fiber_counts: BTreeMap<u32, usize>,
    pub points: usize,
    /// Tangent dimension of the total space -> number of points.
    pub tangent_histogram: BTreeMap<usize, usize>,
    pub singular_total: Vec<PointTangents>,
    pub singular_first: Vec<PointTangents>,
    pub singular_second: Vec<PointTangents>,
    /// Points where `singular(total) = singular(first) ∪ singular(second)` fails.
    pub violations: Vec<PointTangents>,
    pub caveats: Vec<String>,
}

impl SingularLocusReport {
    pub fn union_law_holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Classifies every total-space point as smooth or singular for the
/// intersection and for each factor, and compares the singular sets.
pub fn singular_locus_map(
    fam: &PolynomialFamily,
    cond: &Conditions,
    expected: FamilyExpected,
    budget: Budget,
) -> Result<SingularLocusReport> {
    let profile = relpos_profile(fam)?;
    let versal_pattern = profile.is_versal_pattern();
    let mut caveats = vec![PROFILE_CAVEAT.to_string(), crate::tangent::GENERATOR_CAVEAT.to_string()];
    if !versal_pattern {
        caveats.push("profile is not of versal type: some fiber is neither transverse nor almost transverse".into());
    }
    let points = enumerate_total_space(fam, cond, budget)?;
    let rows: Vec<PointTangents> = points
        .into_par_iter()
        .map(|pt| {
            let dim = |first, second| {
                let (space, quotient) = total_jacobian(&pt, fam, cond, Factors { first, second });
                space.nullity() - quotient
            };
            PointTangents {
                total: dim(true, true),
                first: dim(true, false),
                second: dim(false, true),
                point: pt,
            }
        })
        .collect();
    let mut report = SingularLocusReport {
        conditions: cond.clone(),
        expected,
        profile,
        versal_pattern,
        fiber_counts: fam.base().map(|s| (s, 0)).collect(),
        points: rows.len(),
        tangent_histogram: BTreeMap::new(),
        singular_total: Vec::new(),
        singular_first: Vec::new(),
        singular_second: Vec::new(),
        violations: Vec::new(),
        caveats,
    };
    for row in rows {
        *report.fiber_counts.entry(row.point.s).or_default() += 1;
        *report.tangent_histogram.entry(row.total).or_default() += 1;
        let t = row.total > expected.total;
        let a = row.first > expected.first;
        let b = row.second > expected.second;
        if a {
            report.singular_first.push(row.clone());
        }
        if b {
            report.singular_second.push(row.clone());
        }
        if t != (a || b) {
            report.violations.push(row.clone());
        }
        if t {
            report.singular_total.push(row);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgeom::{opposite_flag, standard_flag};

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn example_conditions() -> Conditions {
        let l = AdmissiblePartition::new(vec![1, 0], 4).unwrap();
        Conditions::Grass {
            lambda: l.clone(),
            lambda2: l,
        }
    }

    #[test]
    fn polynomial_helpers() {
        let field = f(5);
        // 1 + 2s + 3s^2 at s = 2: 1 + 4 + 12 = 17 = 2; derivative 2 + 6s = 14 = 4
        assert_eq!(eval(field, &[1, 2, 3], 2), 2);
        assert_eq!(derivative_at(field, &[1, 2, 3], 2), 4);
    }

    #[test]
    fn demo_profiles() {
        for p in [2, 3, 5] {
            let fam = demo_family(4, f(p), 2).unwrap();
            let prof = relpos_profile(&fam).unwrap();
            assert!(prof.matches_demo_pattern(2));
            assert_eq!(prof.fibers.iter().filter(|x| x.class == FiberClass::Transverse).count(), p as usize - 1);
        }
    }

    #[test]
    fn constant_families() {
        let field = f(3);
        let s = standard_flag(3, field);
        let same = PolynomialFamily::constant(s.basis(), s.basis()).unwrap();
        let prof = relpos_profile(&same).unwrap();
        assert!(prof.fibers.iter().all(|x| x.class == FiberClass::Other && x.relative_position.is_identity()));
        let o = opposite_flag(3, field);
        let tr = PolynomialFamily::constant(s.basis(), o.basis()).unwrap();
        assert!(relpos_profile(&tr).unwrap().fibers.iter().all(|x| x.class == FiberClass::Transverse));
    }

    #[test]
    fn search_finds_families() {
        let fam = search_family(4, f(3), 2, 11, DEFAULT_SEARCH_ATTEMPTS).unwrap();
        assert!(relpos_profile(&fam).unwrap().matches_demo_pattern(2));
        let line = search_family(2, f(2), 1, 5, DEFAULT_SEARCH_ATTEMPTS).unwrap();
        assert!(relpos_profile(&line).unwrap().matches_demo_pattern(1));
        assert!(matches!(search_family(4, f(3), 4, 0, 10), Err(Error::NotFound(_))));
    }

    #[test]
    fn singular_fiber_is_rejected() {
        let field = f(2);
        // [[s, 0], [0, 1]] drops rank at s = 0
        let p = vec![vec![vec![0, 1], vec![0]], vec![vec![0], vec![1]]];
        let q = vec![vec![vec![1], vec![0]], vec![vec![0], vec![1]]];
        assert_eq!(PolynomialFamily::new(field, 2, p, q), Err(Error::SingularFiber(0)));
    }

    #[test]
    fn example_total_space() {
        for p in [2u32, 3] {
            let q = p as usize;
            let fam = demo_family(4, f(p), 2).unwrap();
            let cond = example_conditions();
            let rep = singular_locus_map(&fam, &cond, cond.expected_dims(4), Budget::default()).unwrap();
            assert_eq!(rep.fiber_counts[&0], 2 * q * q + q + 1);
            for s in 1..p {
                assert_eq!(rep.fiber_counts[&s], (q + 1) * (q + 1));
            }
            assert!(rep.union_law_holds());
            assert_eq!(rep.singular_total.len(), 2);
            assert!(rep.singular_total.iter().all(|x| x.point.s == 0 && x.total >= 4));
            assert_eq!(rep.tangent_histogram.get(&3), Some(&(rep.points - 2)));
        }
    }

    #[test]
    fn unconditioned_total_space_is_smooth() {
        let field = f(2);
        let fam = demo_family(3, field, 1).unwrap();
        let w = Permutation::longest(3).unwrap();
        let cond = Conditions::Flag { sigma: w.clone(), tau: w };
        let rep = singular_locus_map(&fam, &cond, cond.expected_dims(3), Budget::default()).unwrap();
        assert_eq!(rep.points, 2 * 21);
        assert!(rep.singular_total.is_empty());
        assert_eq!(rep.tangent_histogram.keys().copied().collect::<Vec<_>>(), vec![4]);
    }
}
