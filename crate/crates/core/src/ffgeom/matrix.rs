use std::fmt;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from raw residues, reducing them mod `p`.
    pub fn from_data(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let p = field.p();
        Ok(Self {
            field,
            rows,
            cols,
            data: data.into_iter().map(|v| v % p).collect(),
        })
    }

    /// Builds a matrix from signed integer rows.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| field.reduce(v)))
            .collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `k` rows.
    pub fn top_rows(&self, k: usize) -> Matrix {
        Self {
            field: self.field,
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::DimensionMismatch("stacking incompatible matrices".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, r);
            let inv = f.inv(m.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * self.cols + j] = v;
            }
            for i in 0..self.rows {
                let factor = m.get(i, c);
                if i != r && factor != 0 {
                    for j in 0..self.cols {
                        let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                        m.data[i * self.cols + j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space(&self) -> Matrix {
        let (r, pivots) = self.rref_with_pivots();
        r.top_rows(pivots.len())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        e.rank()
    }

    /// Rows form a basis of the right null space `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, free.len(), self.cols);
        for (t, &fc) in free.iter().enumerate() {
            k.data[t * self.cols + fc] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                k.data[t * self.cols + pc] = f.neg(r.get(pi, fc));
            }
        }
        k
    }

    /// Rows of the result span the intersection of the two row spaces.
    pub fn row_space_intersection(&self, other: &Matrix) -> Result<Matrix> {
        let stacked = self.stack(other)?;
        let left_kernel = stacked.transpose().kernel_basis();
        let f = self.field;
        let mut vectors = Self::zeros(f, left_kernel.rows(), self.cols);
        for t in 0..left_kernel.rows() {
            for i in 0..self.rows {
                let c = left_kernel.get(t, i);
                if c == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let idx = t * self.cols + j;
                    vectors.data[idx] = f.add(vectors.data[idx], f.mul(c, self.get(i, j)));
                }
            }
        }
        let (r, pivots) = vectors.rref_with_pivots();
        Ok(r.top_rows(pivots.len()))
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[u32]) -> bool {
        let mut e = Echelon::new(self.field, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        !e.insert(v)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{:?}>{:?}", self.field, self.to_rows())
    }
}

/// Incremental row echelon basis. Each stored row has a leading 1 and
/// vanishes at the pivots of the rows stored before it, so reducing a new
/// vector against the rows in insertion order clears every pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    cols: usize,
    data: Vec<u32>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        Self {
            field,
            cols,
            data: Vec::with_capacity(cols * cols),
            pivots: Vec::with_capacity(cols),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, k: usize) -> &[u32] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (k, &pc) in self.pivots.iter().enumerate() {
            let factor = v[pc];
            if factor != 0 {
                let row = &self.data[k * self.cols..(k + 1) * self.cols];
                // stored rows vanish left of their pivot
                for j in pc..self.cols {
                    v[j] = f.sub(v[j], f.mul(factor, row[j]));
                }
            }
        }
    }

    /// Inserts `v`; returns true iff it was independent of the stored rows.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.insert_owned(&mut w)
    }

    /// Like [`Echelon::insert`] but reuses the caller's buffer.
    pub fn insert_owned(&mut self, w: &mut [u32]) -> bool {
        self.reduce(w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.data.extend_from_slice(w);
        self.pivots.push(pc);
        true
    }

    pub fn into_matrix(self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.pivots.len(),
            cols: self.cols,
            data: self.data,
        }
    }
}
