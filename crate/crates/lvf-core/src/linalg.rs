//! Dense exact linear algebra over the Gaussian rationals. Sized for the
//! small systems that arise here (kernels of coefficient maps, algebra
//! multiplication tables); everything is Gaussian elimination, no pivoting
//! heuristics needed over an exact field.

use crate::scalar::GScalar;
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Dense matrix over `GScalar`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GScalar>,
}

impl GMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GMatrix { rows, cols, data: vec![GScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GScalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GScalar) -> Self {
        let mut m = GMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds from integer entries, row-major rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        GMatrix::from_fn(r, c, |i, j| GScalar::from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GScalar::is_zero)
    }

    pub fn transpose(&self) -> GMatrix {
        GMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, s: &GScalar) -> GMatrix {
        GMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> GScalar {
        debug_assert_eq!(self.rows, self.cols);
        let mut t = GScalar::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// Matrix-vector product `self · v`.
    pub fn mat_vec(&self, v: &[GScalar]) -> Vec<GScalar> {
        debug_assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = GScalar::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc += &(&self[(r, c)] * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row-vector product `v · self`.
    pub fn vec_mat(&self, v: &[GScalar]) -> Vec<GScalar> {
        debug_assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|c| {
                let mut acc = GScalar::zero();
                for r in 0..self.rows {
                    if !v[r].is_zero() && !self[(r, c)].is_zero() {
                        acc += &(&v[r] * &self[(r, c)]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (GMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pivot_row) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, pivot_row);
            let inv = m[(row, col)].checked_inv().expect("pivot is nonzero");
            for c in col..m.cols {
                m[(row, c)] = &m[(row, c)] * &inv;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let delta = &factor * &m[(row, c)];
                        m[(r, c)] = &m[(r, c)] - &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<GMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let augmented = GMatrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                GScalar::one()
            } else {
                GScalar::zero()
            }
        });
        let (reduced, pivots) = augmented.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(GMatrix::from_fn(n, n, |r, c| reduced[(r, c + n)].clone()))
    }

    /// Basis of the right nullspace `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<GScalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|c| !is_pivot[*c]) {
            let mut v = vec![GScalar::zero(); self.cols];
            v[free] = GScalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Whether `v` lies in the row span of `self`.
    pub fn row_span_contains(&self, v: &[GScalar]) -> bool {
        debug_assert_eq!(self.cols, v.len());
        let mut stacked = GMatrix::zeros(self.rows + 1, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                stacked[(r, c)] = self[(r, c)].clone();
            }
        }
        for c in 0..self.cols {
            stacked[(self.rows, c)] = v[c].clone();
        }
        stacked.rank() == self.rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for GMatrix {
    type Output = GScalar;
    fn index(&self, (r, c): (usize, usize)) -> &GScalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut GScalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &GMatrix {
    type Output = GMatrix;
    fn mul(self, rhs: &GMatrix) -> GMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = GMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    if rhs[(k, c)].is_zero() {
                        continue;
                    }
                    let add = &self[(r, k)] * &rhs[(k, c)];
                    out[(r, c)] += &add;
                }
            }
        }
        out
    }
}

impl Add for &GMatrix {
    type Output = GMatrix;
    fn add(self, rhs: &GMatrix) -> GMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GMatrix {
    type Output = GMatrix;
    fn sub(self, rhs: &GMatrix) -> GMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for GMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = GMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let id = GMatrix::identity(2);
        assert_eq!(&a * &id, a);
        let b = GMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let ab = &a * &b;
        assert_eq!(ab, GMatrix::from_int_rows(&[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = GMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(a.mat_vec(v).iter().all(GScalar::is_zero));
        }
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn nullspace_of_invertible_is_trivial() {
        let a = GMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert!(a.nullspace().is_empty());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn row_span_membership() {
        let a = GMatrix::from_int_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        let inside = [GScalar::from_int(2), GScalar::from_int(3), GScalar::from_int(5)];
        let outside = [GScalar::from_int(0), GScalar::from_int(0), GScalar::from_int(1)];
        assert!(a.row_span_contains(&inside));
        assert!(!a.row_span_contains(&outside));
    }
}
