//! Zariski tangent dimensions of determinantal loci on a frame lift.
//!
//! A point is lifted to a full-rank matrix whose entries are ambient
//! coordinates (optionally together with a base coordinate `s`). Every
//! condition `rank(stack(fixed rows, moving rows)) <= bound` contributes all
//! `(bound + 1)`-minors of the stacked matrix; each minor is evaluated on
//! first-order jets, so its gradient is the ε-part of the minor at the
//! perturbed matrix. The tangent dimension is the nullity of the resulting
//! Jacobian minus the dimension of the lift's structure group.

use serde::Serialize;

use crate::ffgeom::{Echelon, Matrix, PrimeField};

pub const GENERATOR_CAVEAT: &str = "tangent space is the kernel of the Jacobian of the minors of stacked matrices; \
if these minors do not generate the full ideal the reported dimension is an upper bound";

const NO_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Entry {
    val: u32,
    var: u32,
    coeff: u32,
}

/// Matrix rows whose entries are affine jets `val + coeff * ε_var`.
#[derive(Clone, Debug)]
pub struct JetRows {
    cols: usize,
    entries: Vec<Entry>,
}

impl JetRows {
    /// Rows with zero derivative.
    pub fn constant(m: &Matrix) -> Self {
        Self {
            cols: m.cols(),
            entries: m
                .data()
                .iter()
                .map(|&val| Entry {
                    val,
                    var: NO_VAR,
                    coeff: 0,
                })
                .collect(),
        }
    }

    /// Lift coordinates: entry `(a, b)` is the variable `offset + a * cols + b`.
    pub fn lift(m: &Matrix, offset: usize) -> Self {
        Self {
            cols: m.cols(),
            entries: m
                .data()
                .iter()
                .enumerate()
                .map(|(k, &val)| Entry {
                    val,
                    var: (offset + k) as u32,
                    coeff: 1,
                })
                .collect(),
        }
    }

    /// Rows depending on the base coordinate `s_var` with the given derivative.
    pub fn with_derivative(values: &Matrix, derivative: &Matrix, s_var: usize) -> Self {
        Self {
            cols: values.cols(),
            entries: values
                .data()
                .iter()
                .zip(derivative.data())
                .map(|(&val, &d)| Entry {
                    val,
                    var: if d == 0 { NO_VAR } else { s_var as u32 },
                    coeff: d,
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.entries.len() / self.cols.max(1)
    }

    fn row(&self, i: usize) -> &[Entry] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

/// Row space of a Jacobian being assembled condition by condition.
#[derive(Clone, Debug)]
pub struct JacobianSpace {
    field: PrimeField,
    nvars: usize,
    echelon: Echelon,
    scratch: Vec<u32>,
}

impl JacobianSpace {
    pub fn new(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            echelon: Echelon::new(field, nvars),
            scratch: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn nullity(&self) -> usize {
        self.nvars - self.rank()
    }

    fn full(&self) -> bool {
        self.rank() == self.nvars
    }

    /// Adds the gradients of all `(bound + 1)`-minors of
    /// `stack(fixed rows 0..fixed_rows, moving rows 0..moving_rows)`.
    pub fn add_rank_condition(
        &mut self,
        fixed: &JetRows,
        fixed_rows: usize,
        moving: &JetRows,
        moving_rows: usize,
        bound: usize,
    ) {
        let cols = fixed.cols;
        debug_assert_eq!(cols, moving.cols);
        let k = bound + 1;
        let total = fixed_rows + moving_rows;
        if k > total || k > cols || self.full() {
            return;
        }
        let stacked: Vec<&[Entry]> = (0..fixed_rows)
            .map(|i| fixed.row(i))
            .chain((0..moving_rows).map(|i| moving.row(i)))
            .collect();
        let row_sets = combinations(total, k);
        let col_sets = combinations(cols, k);
        let mut dp = MinorDp::new(self.field, self.nvars, k);
        for rs in &row_sets {
            // minors made only of constant entries contribute nothing
            if rs.iter().all(|&r| stacked[r].iter().all(|e| e.var == NO_VAR)) {
                continue;
            }
            for cs in &col_sets {
                let grad = dp.gradient(&stacked, rs, cs);
                self.scratch.clear();
                self.scratch.extend_from_slice(grad);
                if self.scratch.iter().any(|&g| g != 0) {
                    let mut w = std::mem::take(&mut self.scratch);
                    self.echelon.insert_owned(&mut w);
                    self.scratch = w;
                    if self.full() {
                        return;
                    }
                }
            }
        }
    }

    /// Row space of the union of both Jacobians.
    pub fn merged(&self, other: &JacobianSpace) -> JacobianSpace {
        let mut out = self.clone();
        for k in 0..other.echelon.rank() {
            if out.full() {
                break;
            }
            out.echelon.insert(other.echelon.row(k));
        }
        out
    }
}

/// Determinant of a `k x k` jet matrix by dynamic programming over used
/// column subsets, carrying value and full gradient.
struct MinorDp {
    field: PrimeField,
    nvars: usize,
    k: usize,
    // per mask: [value, grad_0, ..., grad_{nvars-1}]
    state: Vec<u32>,
}

impl MinorDp {
    fn new(field: PrimeField, nvars: usize, k: usize) -> Self {
        Self {
            field,
            nvars,
            k,
            state: vec![0; (1usize << k) * (nvars + 1)],
        }
    }

    fn gradient(&mut self, rows: &[&[Entry]], rs: &[usize], cs: &[usize]) -> &[u32] {
        let f = self.field;
        let w = self.nvars + 1;
        let k = self.k;
        self.state.iter_mut().for_each(|x| *x = 0);
        self.state[0] = 1;
        for mask in 0usize..(1 << k) {
            let t = mask.count_ones() as usize;
            if t == k {
                continue;
            }
            let (val, has_grad) = {
                let s = &self.state[mask * w..(mask + 1) * w];
                (s[0], s[1..].iter().any(|&g| g != 0))
            };
            if val == 0 && !has_grad {
                continue;
            }
            let row = rows[rs[t]];
            for b in 0..k {
                if mask & (1 << b) != 0 {
                    continue;
                }
                let e = row[cs[b]];
                if e.val == 0 && e.var == NO_VAR {
                    continue;
                }
                // sign of placing column b after the columns already used
                let higher = (mask >> (b + 1)).count_ones();
                let neg = higher % 2 == 1;
                // target > mask, so the source lies in the lower half
                let target = mask | (1 << b);
                let (lo, hi) = self.state.split_at_mut(target * w);
                let (src, dst) = (&lo[mask * w..(mask + 1) * w], &mut hi[..w]);
                let term_val = f.mul(src[0], e.val);
                dst[0] = if neg { f.sub(dst[0], term_val) } else { f.add(dst[0], term_val) };
                if e.val != 0 {
                    for v in 1..w {
                        if src[v] != 0 {
                            let t = f.mul(src[v], e.val);
                            dst[v] = if neg { f.sub(dst[v], t) } else { f.add(dst[v], t) };
                        }
                    }
                }
                if e.var != NO_VAR && src[0] != 0 {
                    let idx = e.var as usize + 1;
                    let t = f.mul(src[0], e.coeff);
                    dst[idx] = if neg { f.sub(dst[idx], t) } else { f.add(dst[idx], t) };
                }
            }
        }
        let full = (1 << k) - 1;
        &self.state[full * w + 1..(full + 1) * w]
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
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

/// Result of a tangent computation at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport<P> {
    pub point: P,
    pub ambient_nullity: usize,
    pub quotient_dim: usize,
    pub tangent_dim: usize,
    pub caveat: &'static str,
}

impl<P> TangentReport<P> {
    pub fn new(point: P, space: &JacobianSpace, quotient_dim: usize) -> Self {
        let nullity = space.nullity();
        Self {
            point,
            ambient_nullity: nullity,
            quotient_dim,
            tangent_dim: nullity.saturating_sub(quotient_dim),
            caveat: GENERATOR_CAVEAT,
        }
    }

    /// Excess over the expected local dimension.
    pub fn is_singular(&self, expected_dim: usize) -> bool {
        self.tangent_dim > expected_dim
    }
}
