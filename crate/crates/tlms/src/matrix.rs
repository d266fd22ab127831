//! Dense matrices over the exact rationals.
//!
//! Coefficient matrices are indexed (row, col) = (sheet of the first cone,
//! sheet of the second cone); composing the transition σ₁→σ₂ with σ₂→σ₃
//! is the product `g₁₂ · g₂₃`, chaining left to right in traversal order.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::{rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix size mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// 2×2 matrix from integer entries, row-major.
    pub fn from_i64_2x2(e: [[i64; 2]; 2]) -> Self {
        Self::from_rows(vec![
            vec![rat(e[0][0]), rat(e[0][1])],
            vec![rat(e[1][0]), rat(e[1][1])],
        ])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::SizeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self[(i, l)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, l)] * &other[(l, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::SizeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = &*a + b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::SizeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = &*a - b;
        }
        Ok(out)
    }

    pub fn scale(&self, t: &Rat) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = &*a * t;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        // Fraction-free enough at these sizes: plain Gaussian elimination
        // over the rationals is exact.
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                for j in 0..n {
                    let a = m[(p, j)].clone();
                    let b = m[(col, j)].clone();
                    m[(p, j)] = b;
                    m[(col, j)] = a;
                }
                det = -det;
            }
            det = &det * &m[(col, col)];
            let inv = m[(col, col)].recip();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                for j in col..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Err(MatrixError::Singular);
            };
            if p != col {
                for j in 0..n {
                    m.entries.swap(p * n + j, col * n + j);
                    inv.entries.swap(p * n + j, col * n + j);
                }
            }
            let d = m[(col, col)].recip();
            for j in 0..n {
                m[(col, j)] = &m[(col, j)] * &d;
                inv[(col, j)] = &inv[(col, j)] * &d;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for j in 0..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                    let t = &f * &inv[(col, j)];
                    inv[(r, j)] = &inv[(r, j)] - &t;
                }
            }
        }
        Ok(inv)
    }

    /// Block-diagonal sum placing `other` after `self`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitriangular_inverse() {
        let a = RatMatrix::from_i64_2x2([[1, -3], [0, 1]]);
        let b = a.inverse().unwrap();
        assert_eq!(b, RatMatrix::from_i64_2x2([[1, 3], [0, 1]]));
        assert!(a.mul(&b).unwrap().is_identity());
    }

    #[test]
    fn det_and_singularity() {
        let a = RatMatrix::from_i64_2x2([[0, -1], [1, 1]]);
        assert_eq!(a.det(), rat(1));
        let s = RatMatrix::from_i64_2x2([[1, 2], [2, 4]]);
        assert_eq!(s.det(), rat(0));
        assert_eq!(s.inverse(), Err(MatrixError::Singular));
    }

    #[test]
    fn direct_sum_blocks() {
        let a = RatMatrix::identity(1);
        let b = RatMatrix::from_i64_2x2([[2, 0], [0, 3]]);
        let s = a.direct_sum(&b);
        assert_eq!(s.rows(), 3);
        assert_eq!(s[(1, 1)], rat(2));
        assert_eq!(s[(0, 1)], rat(0));
    }
}
