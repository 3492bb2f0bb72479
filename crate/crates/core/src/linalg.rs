//! Dense Gaussian elimination over the ambient field. Matrices with entries
//! in a subfield (e.g. F_q) stay in that subfield under these operations.

use crate::gf::{Elem, FieldCtx};

/// Row-major square or rectangular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self, k: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = k.inv(self.get(row, col)).unwrap();
            for c in 0..self.cols {
                let v = k.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = k.sub(self.get(r, c), k.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &FieldCtx) -> usize {
        self.clone().rref(k).len()
    }

    pub fn inverse(&self, k: &FieldCtx) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, Elem::ONE);
        }
        let pivots = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Some(out)
    }

    /// Solves self * x = rhs for square invertible self.
    pub fn solve(&self, k: &FieldCtx, rhs: &[Elem]) -> Option<Vec<Elem>> {
        let inv = self.inverse(k)?;
        Some(inv.mul_vec(k, rhs))
    }

    pub fn mul_vec(&self, k: &FieldCtx, v: &[Elem]) -> Vec<Elem> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(Elem::ZERO, |acc, c| k.add(acc, k.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    pub fn mul(&self, k: &FieldCtx, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols)
                    .fold(Elem::ZERO, |acc, i| k.add(acc, k.mul(self.get(r, i), other.get(i, c))));
                out.set(r, c, v);
            }
        }
        out
    }
}
