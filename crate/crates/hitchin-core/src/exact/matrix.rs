//! Dense matrices over Q with exact Gaussian elimination.
//!
//! Pivoting is first-nonzero in row-major scan order, which makes every
//! returned basis deterministic; reports built on these routines are
//! byte-reproducible. Sizes here are desk-scale (a few hundred rows), so
//! no fraction-free or sparse machinery is needed.

use std::fmt;

use super::{is_zero, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>, // row-major
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![super::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, super::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<Rat>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Self::zero(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(is_zero)
    }

    pub fn mul(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if is_zero(b) {
                        continue;
                    }
                    let v = out.get(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(super::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn add(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // first nonzero entry in column c at or below row r
            let Some(p) = (r..self.rows).find(|&i| !is_zero(self.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = super::one() / self.get(r, c).clone();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || is_zero(self.get(i, c)) {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = self.get(i, j) - &(self.get(r, j) * &f);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Determinant by elimination; panics unless square.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = super::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !is_zero(m.get(i, c))) else {
                return super::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= pivot.clone();
            for i in c + 1..n {
                if is_zero(m.get(i, c)) {
                    continue;
                }
                let f = m.get(i, c) / &pivot;
                for j in c..n {
                    let v = m.get(i, j) - &(m.get(c, j) * &f);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&Self::identity(n));
        let pivots = aug.rref_in_place();
        // invertible iff every pivot lands in the left block
        if pivots.iter().filter(|&&c| c < n).count() != n {
            return None;
        }
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Basis of the kernel `{x : m x = 0}`. Count equals `cols - rank`.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let pivots = a.rref_in_place();
    let mut basis = Vec::new();
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; m.cols()];
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    for free in 0..m.cols() {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![super::zero(); m.cols()];
        x[free] = super::one();
        for (&pc, r) in pivots.iter().zip(0..) {
            x[pc] = -a.get(r, free).clone();
        }
        basis.push(x);
    }
    basis
}

/// Solve `m x = b` exactly; `None` when `b` is outside the column space.
/// Free variables are set to zero, so the solution is deterministic.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    solve_many(m, &[b.to_vec()]).pop().unwrap()
}

/// Batch solve against several right-hand sides with one elimination.
pub fn solve_many(m: &RatMatrix, rhs: &[Vec<Rat>]) -> Vec<Option<Vec<Rat>>> {
    assert!(rhs.iter().all(|b| b.len() == m.rows()));
    let k = rhs.len();
    let mut aug = m.hstack(&RatMatrix::from_cols(rhs.to_vec()));
    let pivots = aug.rref_in_place();
    // pivots inside the augmented block mean that RHS column is inconsistent
    let n = m.cols();
    let mut out = Vec::with_capacity(k);
    for t in 0..k {
        let mut ok = true;
        // any row with zero coefficients but nonzero RHS entry?
        'rows: for i in 0..aug.rows() {
            let coeff_nonzero = (0..n).any(|j| !is_zero(aug.get(i, j)));
            if !coeff_nonzero && !is_zero(aug.get(i, n + t)) {
                ok = false;
                break 'rows;
            }
        }
        if !ok {
            out.push(None);
            continue;
        }
        let mut x = vec![super::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            if c < n {
                x[c] = aug.get(r, n + t).clone();
            }
        }
        out.push(Some(x));
    }
    out
}

/// Representatives completing `span(subspace)` to the ambient space of the
/// given dimension: standard basis vectors at the non-pivot coordinates.
pub fn quotient_basis(space_dim: usize, subspace: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    assert!(subspace.iter().all(|v| v.len() == space_dim));
    if subspace.is_empty() {
        return (0..space_dim)
            .map(|k| {
                let mut e = vec![super::zero(); space_dim];
                e[k] = super::one();
                e
            })
            .collect();
    }
    let mut m = RatMatrix::from_rows(subspace.to_vec());
    let pivots = m.rref_in_place();
    (0..space_dim)
        .filter(|c| !pivots.contains(c))
        .map(|k| {
            let mut e = vec![super::zero(); space_dim];
            e[k] = super::one();
            e
        })
        .collect()
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
