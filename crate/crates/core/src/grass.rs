//! Grassmannian Schubert varieties, partitions and vanishing sequences, and
//! two chain models resolving Grassmannian Richardson sets.
//!
//! For an admissible `λ` with `r` parts, `V ∈ Gr(r, n)` lies in the Schubert
//! variety of `(F, λ)` when `dim(V ∩ F_{n-r+i-λ_i}) ≥ i` for `1 ≤ i ≤ r`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bott::{histogram, FiberReport};
use crate::error::{Error, Result};
use crate::ffgeom::{enumerate_subspaces, gaussian_binomial, Budget, Echelon, Flag, Matrix, PrimeField};
use crate::tangent::{JacobianSpace, JetRows, TangentReport};

/// Weakly decreasing `λ_1 ≥ .. ≥ λ_r ≥ 0` with `λ_1 ≤ n - r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AdmissiblePartition {
    r: usize,
    n: usize,
    parts: Vec<usize>,
}

pub fn is_admissible(parts: &[usize], r: usize, n: usize) -> bool {
    parts.len() == r
        && r <= n
        && parts.windows(2).all(|w| w[0] >= w[1])
        && parts.first().is_none_or(|&l| l <= n - r)
}

impl AdmissiblePartition {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<Self> {
        let r = parts.len();
        if !is_admissible(&parts, r, n) {
            return Err(Error::NotAdmissible(format!("{parts:?} for Gr({r}, {n})")));
        }
        Ok(Self { r, n, parts })
    }

    pub fn zero(r: usize, n: usize) -> Result<Self> {
        Self::new(vec![0; r], n)
    }

    /// Comma-separated parts, e.g. `"1,0"`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts, n)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|λ|`, the codimension in `Gr(r, n)`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Dimension `k_i = n - r + i - λ_i` of the flag piece in condition `i` (1-indexed).
    pub fn piece(&self, i: usize) -> usize {
        self.n - self.r + i - self.parts[i - 1]
    }
}

impl fmt::Display for AdmissiblePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `λ = (μ_1^{i_1}, .., μ_j^{i_j})` over the nonzero parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentForm {
    pub pairs: Vec<(usize, usize)>,
    pub type_j: usize,
    pub prefix_sums: Vec<usize>,
}

impl ExponentForm {
    /// The nonzero parts, padded with zeros to length `r`.
    pub fn expand(&self, r: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .pairs
            .iter()
            .flat_map(|&(mu, i)| std::iter::repeat_n(mu, i))
            .collect();
        out.resize(r.max(out.len()), 0);
        out
    }
}

pub fn exponent_form(lambda: &AdmissiblePartition) -> ExponentForm {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &p in lambda.parts.iter().filter(|&&p| p > 0) {
        match pairs.last_mut() {
            Some((mu, count)) if *mu == p => *count += 1,
            _ => pairs.push((p, 1)),
        }
    }
    let prefix_sums = pairs
        .iter()
        .scan(0, |acc, &(_, i)| {
            *acc += i;
            Some(*acc)
        })
        .collect();
    ExponentForm {
        type_j: pairs.len(),
        pairs,
        prefix_sums,
    }
}

/// Strictly increasing `0 ≤ a_1 < .. < a_{r+1} ≤ d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VanishingSequence {
    r: usize,
    d: usize,
    values: Vec<usize>,
}

impl VanishingSequence {
    pub fn new(values: Vec<usize>, d: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::OutOfBounds("empty vanishing sequence".into()));
        }
        if !values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::OutOfBounds(format!("{values:?} is not strictly increasing")));
        }
        if *values.last().unwrap() > d {
            return Err(Error::OutOfBounds(format!("{values:?} exceeds d = {d}")));
        }
        Ok(Self {
            r: values.len() - 1,
            d,
            values,
        })
    }

    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values, d)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Uniformly random sequence with the given bounds.
    pub fn random<R: Rng>(r: usize, d: usize, rng: &mut R) -> Result<Self> {
        if r + 1 > d + 1 {
            return Err(Error::OutOfBounds(format!("r = {r} too large for d = {d}")));
        }
        let mut values = rand::seq::index::sample(rng, d + 1, r + 1).into_vec();
        values.sort_unstable();
        Self::new(values, d)
    }
}

/// `λ_i = a_{r+2-i} - (r+1-i)`; the result has `r + 1` parts and is
/// admissible for `Gr(r+1, d+1)`.
pub fn vanishing_to_partition(a: &VanishingSequence) -> Result<AdmissiblePartition> {
    let r = a.r;
    let parts = (1..=r + 1)
        .map(|i| a.values[r + 1 - i] - (r + 1 - i))
        .collect();
    AdmissiblePartition::new(parts, a.d + 1)
}

/// Inverse of [`vanishing_to_partition`]: `a_k = λ_{r+2-k} + k - 1`.
pub fn partition_to_vanishing(lambda: &[usize], r: usize, d: usize) -> Result<VanishingSequence> {
    if lambda.len() != r + 1 {
        return Err(Error::OutOfBounds(format!(
            "need {} parts, got {}",
            r + 1,
            lambda.len()
        )));
    }
    if r > d || !is_admissible(lambda, r + 1, d + 1) {
        return Err(Error::NotAdmissible(format!("{lambda:?} for r = {r}, d = {d}")));
    }
    let values = (1..=r + 1).map(|k| lambda[r + 1 - k] + k - 1).collect();
    VanishingSequence::new(values, d)
}

/// An `r`-dimensional subspace, stored as its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassPoint {
    basis: Matrix,
}

impl GrassPoint {
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let basis = m.row_space();
        if basis.rows() != m.rows() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { basis })
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn n(&self) -> usize {
        self.basis.cols()
    }

    pub fn r(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// `dim(self ∩ W)` for a subspace spanned by the rows of `w`.
    pub fn meet_dim(&self, w: &Matrix) -> usize {
        let stacked = w.stack(&self.basis).expect("same ambient dimension");
        w.rank() + self.r() - stacked.rank()
    }
}

impl fmt::Debug for GrassPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrassPoint{:?}", self.basis.to_rows())
    }
}

impl fmt::Display for GrassPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "<{}>", rows.join(" | "))
    }
}

impl Serialize for GrassPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_subspace(&self.basis, s)
    }
}

fn serialize_subspace<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Repr {
        p: u32,
        n: usize,
        r: usize,
        rows: Vec<Vec<u32>>,
    }
    Repr {
        p: m.field().p(),
        n: m.cols(),
        r: m.rows(),
        rows: m.to_rows(),
    }
    .serialize(s)
}

fn check_ambient(v: &GrassPoint, f: &Flag, lambda: &AdmissiblePartition) -> Result<()> {
    if v.n() != f.n() || v.field() != f.field() || lambda.n != f.n() || lambda.r != v.r() {
        return Err(Error::DimensionMismatch(format!(
            "Gr({}, {}) point against flag in dimension {} and partition for Gr({}, {})",
            v.r(),
            v.n(),
            f.n(),
            lambda.r,
            lambda.n
        )));
    }
    Ok(())
}

pub fn grass_schubert_member(v: &GrassPoint, f: &Flag, lambda: &AdmissiblePartition) -> Result<bool> {
    check_ambient(v, f, lambda)?;
    Ok((1..=lambda.r).all(|i| v.meet_dim(&f.piece(lambda.piece(i))) >= i))
}

/// Every condition with `λ_i > 0` holds with equality.
pub fn grass_exact_position(v: &GrassPoint, f: &Flag, lambda: &AdmissiblePartition) -> Result<bool> {
    check_ambient(v, f, lambda)?;
    Ok((1..=lambda.r)
        .filter(|&i| lambda.parts[i - 1] > 0)
        .all(|i| v.meet_dim(&f.piece(lambda.piece(i))) == i))
}

/// All `r`-dimensional subspaces of `F_p^n` in enumeration order.
pub fn enumerate_grassmannian(n: usize, r: usize, field: PrimeField, budget: Budget) -> Result<Vec<GrassPoint>> {
    Ok(enumerate_subspaces(n, r, field, budget)?
        .into_iter()
        .map(|basis| GrassPoint { basis })
        .collect())
}

pub fn enumerate_grass_schubert(f: &Flag, lambda: &AdmissiblePartition, budget: Budget) -> Result<Vec<GrassPoint>> {
    let all = enumerate_grassmannian(f.n(), lambda.r, f.field(), budget)?;
    let kept: Vec<Option<GrassPoint>> = all
        .into_par_iter()
        .map(|v| grass_schubert_member(&v, f, lambda).map(|k| k.then_some(v)))
        .collect::<Result<_>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// All subspaces `W` of dimension `dim` with `lower ⊆ W ⊆ upper`, each as
/// its reduced row echelon basis. `lower` must be contained in `upper`.
pub fn subspaces_between(lower: &Matrix, upper: &Matrix, dim: usize, budget: Budget) -> Result<Vec<Matrix>> {
    let field = upper.field();
    let n = upper.cols();
    let mut e = Echelon::new(field, n);
    for i in 0..lower.rows() {
        e.insert(lower.row(i));
    }
    let base = e.rank();
    let mut complement = Vec::new();
    for i in 0..upper.rows() {
        if e.insert(upper.row(i)) {
            complement.push(upper.row(i).to_vec());
        }
    }
    if e.rank() != base + complement.len() || dim < base || dim > e.rank() {
        return Ok(Vec::new());
    }
    let m = complement.len();
    let coords = enumerate_subspaces(m, dim - base, field, budget)?;
    let lower_basis = lower.row_space();
    coords
        .into_iter()
        .map(|u| {
            let mut data = lower_basis.data().to_vec();
            for t in 0..u.rows() {
                let mut v = vec![0u32; n];
                for (k, c) in complement.iter().enumerate() {
                    let a = u.get(t, k);
                    if a != 0 {
                        for (x, &y) in v.iter_mut().zip(c) {
                            *x = field.add(*x, field.mul(a, y));
                        }
                    }
                }
                data.extend(v);
            }
            Ok(Matrix::from_data(field, dim, n, data)?.row_space())
        })
        .collect()
}

fn zero_space(field: PrimeField, n: usize) -> Matrix {
    Matrix::zeros(field, 0, n)
}

/// Nested subspaces `V_1 ⊂ .. ⊂ V_j` with `dim V_s = a_s` and
/// `V_s ⊆ F_{n-r+a_s-λ_{a_s}}`, augmented by an `r`-dimensional `V ⊇ V_j`
/// when `a_j < r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassChain {
    pub subspaces: Vec<Matrix>,
    pub augmentation: Option<Matrix>,
}

impl GrassChain {
    /// The `r`-dimensional member.
    pub fn projection(&self) -> GrassPoint {
        let m = self
            .augmentation
            .as_ref()
            .or(self.subspaces.last())
            .expect("chain with neither subspaces nor augmentation");
        GrassPoint { basis: m.clone() }
    }
}

impl Serialize for GrassChain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            subspaces: Vec<Vec<Vec<u32>>>,
            augmentation: Option<Vec<Vec<u32>>>,
        }
        Repr {
            subspaces: self.subspaces.iter().map(|m| m.to_rows()).collect(),
            augmentation: self.augmentation.as_ref().map(|m| m.to_rows()),
        }
        .serialize(s)
    }
}

pub fn enumerate_z_chain(f: &Flag, lambda: &AdmissiblePartition, budget: Budget) -> Result<Vec<GrassChain>> {
    if lambda.n != f.n() {
        return Err(Error::DimensionMismatch(format!(
            "partition for n = {} against flag in dimension {}",
            lambda.n,
            f.n()
        )));
    }
    let form = exponent_form(lambda);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let start = zero_space(f.field(), f.n());
    extend_chain(f, lambda, &form.prefix_sums, start, &mut stack, &mut out, budget)?;
    Ok(out)
}

fn extend_chain(
    f: &Flag,
    lambda: &AdmissiblePartition,
    a: &[usize],
    last: Matrix,
    stack: &mut Vec<Matrix>,
    out: &mut Vec<GrassChain>,
    budget: Budget,
) -> Result<()> {
    let (n, r) = (f.n(), lambda.r);
    let depth = stack.len();
    if depth == a.len() {
        if last.rows() == r {
            out.push(GrassChain {
                subspaces: stack.clone(),
                augmentation: None,
            });
        } else {
            let whole = Matrix::identity(f.field(), n);
            for v in subspaces_between(&last, &whole, r, budget)? {
                out.push(GrassChain {
                    subspaces: stack.clone(),
                    augmentation: Some(v),
                });
            }
        }
        budget.check(out.len() as u128)?;
        return Ok(());
    }
    let a_s = a[depth];
    let k = n - r + a_s - lambda.parts[a_s - 1];
    for w in subspaces_between(&last, &f.piece(k), a_s, budget)? {
        stack.push(w.clone());
        extend_chain(f, lambda, a, w, stack, out, budget)?;
        stack.pop();
    }
    Ok(())
}

/// A point `(L, p_1, p_2, H_1, H_2)` of the hyperplane-augmented model for
/// lines in `P^3` meeting two fixed lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleTuple {
    pub l: GrassPoint,
    pub p1: Matrix,
    pub p2: Matrix,
    pub h1: Matrix,
    pub h2: Matrix,
}

impl Serialize for ExampleTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            l: &'a GrassPoint,
            p1: Vec<Vec<u32>>,
            p2: Vec<Vec<u32>>,
            h1: Vec<Vec<u32>>,
            h2: Vec<Vec<u32>>,
        }
        Repr {
            l: &self.l,
            p1: self.p1.to_rows(),
            p2: self.p2.to_rows(),
            h1: self.h1.to_rows(),
            h2: self.h2.to_rows(),
        }
        .serialize(s)
    }
}

fn sum_space(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    Ok(a.stack(b)?.row_space())
}

/// All tuples with `p_1 ⊆ L ∩ F_2`, `p_2 ⊆ L ∩ G_2`, `H_1 ⊇ L + F_2`,
/// `H_2 ⊇ L + G_2` in `F_p^4`, points and planes of dimension 1 and 3.
pub fn enumerate_z_example(f: &Flag, g: &Flag, budget: Budget) -> Result<Vec<ExampleTuple>> {
    if f.n() != 4 || g.n() != 4 || f.field() != g.field() {
        return Err(Error::DimensionMismatch("the example model lives in dimension 4".into()));
    }
    let field = f.field();
    let whole = Matrix::identity(field, 4);
    let zero = zero_space(field, 4);
    let (f2, g2) = (f.piece(2), g.piece(2));
    let lines = enumerate_grassmannian(4, 2, field, budget)?;
    let per_line: Vec<Vec<ExampleTuple>> = lines
        .into_par_iter()
        .map(|l| -> Result<Vec<ExampleTuple>> {
            let lf = l.basis.row_space_intersection(&f2)?;
            let lg = l.basis.row_space_intersection(&g2)?;
            let p1s = subspaces_between(&zero, &lf, 1, budget)?;
            let p2s = subspaces_between(&zero, &lg, 1, budget)?;
            let h1s = subspaces_between(&sum_space(&l.basis, &f2)?, &whole, 3, budget)?;
            let h2s = subspaces_between(&sum_space(&l.basis, &g2)?, &whole, 3, budget)?;
            let mut out = Vec::new();
            for p1 in &p1s {
                for p2 in &p2s {
                    for h1 in &h1s {
                        for h2 in &h2s {
                            out.push(ExampleTuple {
                                l: l.clone(),
                                p1: p1.clone(),
                                p2: p2.clone(),
                                h1: h1.clone(),
                                h2: h2.clone(),
                            });
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let out: Vec<ExampleTuple> = per_line.into_iter().flatten().collect();
    budget.check(out.len() as u128)?;
    Ok(out)
}

/// Which chain model resolves the Richardson set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Nested subspaces under the flag, augmented to dimension `r`.
    Chain,
    /// Points and hyperplanes, for lines in `P^3` meeting two lines.
    Example,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Variant::Chain),
            "example" => Ok(Variant::Example),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// Fibers of a Grassmannian Richardson resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassResolution {
    pub variant: Variant,
    /// Total number of chain pairs or tuples.
    pub total: usize,
    pub fibers: Vec<FiberReport<GrassPoint>>,
}

impl GrassResolution {
    pub fn image_size(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber_histogram(&self) -> BTreeMap<usize, usize> {
        histogram(&self.fibers)
    }

    pub fn fiber_over(&self, v: &GrassPoint) -> usize {
        self.fibers
            .iter()
            .find(|f| &f.target == v)
            .map_or(0, |f| f.fiber_size)
    }
}

fn projection_counts(chains: &[GrassChain]) -> BTreeMap<GrassPoint, usize> {
    let mut m = BTreeMap::new();
    for c in chains {
        *m.entry(c.projection()).or_default() += 1;
    }
    m
}

/// Joins the two chain families on the projected point and checks the image
/// against the Richardson set and the fibers over the exact locus.
pub fn resolve_grass_richardson(
    p: &Flag,
    lambda: &AdmissiblePartition,
    q: &Flag,
    lambda2: &AdmissiblePartition,
    variant: Variant,
    budget: Budget,
) -> Result<GrassResolution> {
    if lambda.r != lambda2.r || p.n() != q.n() || p.field() != q.field() {
        return Err(Error::DimensionMismatch("resolution factors live in different Grassmannians".into()));
    }
    let counts: BTreeMap<GrassPoint, usize> = match variant {
        Variant::Chain => {
            let left = projection_counts(&enumerate_z_chain(p, lambda, budget)?);
            let right = projection_counts(&enumerate_z_chain(q, lambda2, budget)?);
            left.into_iter()
                .filter_map(|(v, a)| right.get(&v).map(|b| (v, a * b)))
                .collect()
        }
        Variant::Example => {
            let shape = AdmissiblePartition::new(vec![1, 0], 4)?;
            if lambda != &shape || lambda2 != &shape {
                return Err(Error::DimensionMismatch(
                    "the example model is defined for Gr(2, 4) and partitions (1,0)".into(),
                ));
            }
            let mut m = BTreeMap::new();
            for t in enumerate_z_example(p, q, budget)? {
                *m.entry(t.l).or_default() += 1;
            }
            m
        }
    };
    let left: BTreeSet<GrassPoint> = enumerate_grass_schubert(p, lambda, budget)?.into_iter().collect();
    let right: BTreeSet<GrassPoint> = enumerate_grass_schubert(q, lambda2, budget)?.into_iter().collect();
    let expected: BTreeSet<&GrassPoint> = left.intersection(&right).collect();
    let image: BTreeSet<&GrassPoint> = counts.keys().collect();
    if let Some(v) = image.symmetric_difference(&expected).next() {
        return Err(Error::ResolutionMismatch(format!("Grassmannian image differs at {v}")));
    }
    let mut fibers = Vec::with_capacity(counts.len());
    let mut total = 0;
    for (v, size) in counts {
        total += size;
        let exact = grass_exact_position(&v, p, lambda)? && grass_exact_position(&v, q, lambda2)?;
        if exact && size != 1 {
            return Err(Error::ResolutionMismatch(format!("fiber of size {size} over exact point {v}")));
        }
        fibers.push(FiberReport {
            target: v,
            fiber_size: size,
            exact_position: exact,
        });
    }
    Ok(GrassResolution {
        variant,
        total,
        fibers,
    })
}

/// Adds the minors of every Grassmannian Schubert condition of `λ` to `space`.
pub fn add_grass_conditions(
    space: &mut JacobianSpace,
    fixed: &JetRows,
    moving: &JetRows,
    lambda: &AdmissiblePartition,
) {
    let r = lambda.r;
    for i in 1..=r {
        let k = lambda.piece(i);
        space.add_rank_condition(fixed, k, moving, r, k + r - i);
    }
}

pub fn grass_quotient_dim(r: usize) -> usize {
    r * r
}

/// Tangent dimension at `v` of the intersection of the given Grassmannian
/// Schubert varieties, on the Stiefel lift of `v`.
pub fn tangent_dimension_grass(
    v: &GrassPoint,
    conditions: &[(Flag, AdmissiblePartition)],
) -> Result<TangentReport<GrassPoint>> {
    for (f, lambda) in conditions {
        if !grass_schubert_member(v, f, lambda)? {
            return Err(Error::NotAMember);
        }
    }
    let (r, n) = (v.r(), v.n());
    let mut space = JacobianSpace::new(v.field(), r * n);
    let moving = JetRows::lift(&v.basis, 0);
    for (f, lambda) in conditions {
        add_grass_conditions(&mut space, &JetRows::constant(f.basis()), &moving, lambda);
    }
    Ok(TangentReport::new(v.clone(), &space, grass_quotient_dim(r)))
}

/// `Σ q^{r(n-r) - |μ|}` over partitions `μ ⊇ λ` in the `r x (n-r)` box: the
/// point count of a Grassmannian Schubert variety from its cell decomposition.
pub fn schubert_cell_sum(lambda: &AdmissiblePartition, q: u64) -> u128 {
    // sizes of all μ with λ_i ≤ μ_i ≤ μ_{i-1}
    fn sizes(lambda: &[usize], i: usize, top: usize, size: usize, out: &mut Vec<usize>) {
        if i == lambda.len() {
            out.push(size);
            return;
        }
        for part in lambda[i]..=top {
            sizes(lambda, i + 1, part, size + part, out);
        }
    }
    let full = lambda.r * (lambda.n - lambda.r);
    let mut out = Vec::new();
    sizes(&lambda.parts, 0, lambda.n - lambda.r, 0, &mut out);
    out.iter().map(|&m| (q as u128).pow((full - m) as u32)).sum()
}

/// `|Gr(r, n)(F_q)|`.
pub fn grassmannian_count(n: usize, r: usize, q: u64) -> u128 {
    gaussian_binomial(n, r, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffgeom::{opposite_flag, random_flag, standard_flag};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn lam(parts: &[usize], n: usize) -> AdmissiblePartition {
        AdmissiblePartition::new(parts.to_vec(), n).unwrap()
    }

    #[test]
    fn admissibility_and_exponent_form() {
        let l = lam(&[4, 3, 3, 2, 1], 9);
        let e = exponent_form(&l);
        assert_eq!(e.pairs, vec![(4, 1), (3, 2), (2, 1), (1, 1)]);
        assert_eq!(e.type_j, 4);
        assert_eq!(e.prefix_sums, vec![1, 3, 4, 5]);
        assert_eq!(e.expand(5), l.parts);
        let z = exponent_form(&lam(&[0, 0], 4));
        assert_eq!(z.type_j, 0);
        assert!(z.pairs.is_empty());
        assert!(!is_admissible(&[5, 0], 2, 4));
        assert!(AdmissiblePartition::new(vec![5, 0], 4).is_err());
    }

    #[test]
    fn vanishing_conversions() {
        let a = VanishingSequence::new(vec![0, 2], 4).unwrap();
        let l = vanishing_to_partition(&a).unwrap();
        assert_eq!(l.parts(), &[1, 0]);
        assert_eq!(partition_to_vanishing(l.parts(), 1, 4).unwrap(), a);
        let minimal = VanishingSequence::new(vec![0, 1, 2, 3], 6).unwrap();
        assert_eq!(vanishing_to_partition(&minimal).unwrap().parts(), &[0, 0, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let r = rng.gen_range(0..4);
            let d = rng.gen_range(r..8);
            let a = VanishingSequence::random(r, d, &mut rng).unwrap();
            let l = vanishing_to_partition(&a).unwrap();
            assert_eq!(partition_to_vanishing(l.parts(), r, d).unwrap(), a);
        }
    }

    #[test]
    fn lines_meeting_a_line() {
        let fl = standard_flag(4, f(2));
        let pts = enumerate_grass_schubert(&fl, &lam(&[1, 0], 4), Budget::default()).unwrap();
        // cells of the partitions containing (1): q^3 + 2q^2 + q + 1
        assert_eq!(pts.len(), 19);
        // complement: q^4 lines disjoint from a fixed line
        assert_eq!(35 - pts.len(), 16);
        let all = enumerate_grass_schubert(&fl, &lam(&[0, 0], 4), Budget::default()).unwrap();
        assert_eq!(all.len(), 35);
        assert_eq!(schubert_cell_sum(&lam(&[1, 0], 4), 2), 19);
        assert_eq!(schubert_cell_sum(&lam(&[0, 0], 4), 2), 35);
        let fl3 = standard_flag(4, f(3));
        for parts in [[1, 0], [1, 1], [2, 0], [2, 1], [2, 2]] {
            let l = lam(&parts, 4);
            let count = enumerate_grass_schubert(&fl3, &l, Budget::default()).unwrap().len();
            assert_eq!(count as u128, schubert_cell_sum(&l, 3), "{parts:?}");
        }
        let top = enumerate_grass_schubert(&fl, &lam(&[2, 2], 4), Budget::default()).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].basis(), &fl.piece(2));
    }

    #[test]
    fn chain_model_counts() {
        let fl = standard_flag(4, f(2));
        let chains = enumerate_z_chain(&fl, &lam(&[1, 0], 4), Budget::default()).unwrap();
        assert_eq!(chains.len(), 21);
        let image: BTreeSet<GrassPoint> = chains.iter().map(|c| c.projection()).collect();
        let expected: BTreeSet<GrassPoint> = enumerate_grass_schubert(&fl, &lam(&[1, 0], 4), Budget::default())
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(image, expected);
        let free = enumerate_z_chain(&fl, &lam(&[0, 0], 4), Budget::default()).unwrap();
        assert_eq!(free.len(), 35);
    }

    /// `F` standard and `G` with `G_2 ∩ F_2 = <e_2>`.
    fn special_pair(p: u32) -> (Flag, Flag) {
        let field = f(p);
        let g = Matrix::from_rows(
            field,
            &[vec![0, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 0, 0]],
        )
        .unwrap();
        (standard_flag(4, field), Flag::from_matrix(&g).unwrap())
    }

    #[test]
    fn example_fibers_both_variants() {
        for p in [2u32, 3] {
            let q = p as usize;
            let (fl, gl) = special_pair(p);
            let l = lam(&[1, 0], 4);
            let ex = resolve_grass_richardson(&fl, &l, &gl, &l, Variant::Example, Budget::default()).unwrap();
            let ch = resolve_grass_richardson(&fl, &l, &gl, &l, Variant::Chain, Budget::default()).unwrap();
            assert_eq!(ex.image_size(), 2 * q * q + q + 1);
            let fp = GrassPoint::from_matrix(&fl.piece(2)).unwrap();
            let gp = GrassPoint::from_matrix(&gl.piece(2)).unwrap();
            assert_eq!(ex.fiber_over(&fp), (q + 1) * (q + 1));
            assert_eq!(ex.fiber_over(&gp), (q + 1) * (q + 1));
            assert_eq!(ch.fiber_over(&fp), q + 1);
            assert_eq!(ch.fiber_over(&gp), q + 1);
            let targets = |r: &GrassResolution| r.fibers.iter().map(|x| x.target.clone()).collect::<Vec<_>>();
            assert_eq!(targets(&ex), targets(&ch));
            for r in [&ex, &ch] {
                let others = r.fibers.iter().filter(|x| x.target != fp && x.target != gp);
                assert!(others.clone().all(|x| x.fiber_size == 1));
            }
        }
    }

    #[test]
    fn grass_tangents() {
        let field = f(3);
        let fl = standard_flag(4, field);
        let gl = opposite_flag(4, field);
        let l = lam(&[1, 0], 4);
        let any = GrassPoint::from_matrix(&random_flag(4, field, 3).piece(2)).unwrap();
        assert_eq!(tangent_dimension_grass(&any, &[]).unwrap().tangent_dim, 4);
        let cell = GrassPoint::from_matrix(&Matrix::from_rows(field, &[vec![1, 0, 0, 0], vec![0, 0, 1, 1]]).unwrap()).unwrap();
        assert!(grass_exact_position(&cell, &fl, &l).unwrap());
        assert_eq!(tangent_dimension_grass(&cell, &[(fl.clone(), l.clone())]).unwrap().tangent_dim, 3);
        let both = GrassPoint::from_matrix(&Matrix::from_rows(field, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap()).unwrap();
        let conds = [(fl.clone(), l.clone()), (gl, l.clone())];
        assert_eq!(tangent_dimension_grass(&both, &conds).unwrap().tangent_dim, 2);
        let fp = GrassPoint::from_matrix(&fl.piece(2)).unwrap();
        assert_eq!(tangent_dimension_grass(&fp, &[(fl, l)]).unwrap().tangent_dim, 4);
    }
}
