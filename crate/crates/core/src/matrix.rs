//! Row-major dense matrices and determinant by elimination.

use std::ops::{Index, IndexMut};


use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::LengthMismatch {
                left: rows * cols,
                right: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
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

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(l, j)];
                }
            }
        }
        Ok(out)
    }

    /// Scales column `j` by `d[j]`, i.e. `self * diag(d)`.
    pub fn scale_columns(&self, d: &[T]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: d.len(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * d[j]))
    }

    /// Submatrix picked by zero-based row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    limit: self.rows,
                });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    limit: self.cols,
                });
            }
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])]))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::LengthMismatch {
                left: self.data.len(),
                right: other.data.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max))
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
///
/// Kept independent of the Vandermonde product formula so it can serve as
/// an oracle for it.
pub fn det_general<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquareMatrix {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = T::one();
    for col in 0..n {
        let (pivot, best) = (col..n)
            .map(|r| (r, a[r * n + col].modulus()))
            .fold((col, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best == 0.0 {
            return Ok(T::zero());
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor == T::zero() {
                continue;
            }
            for j in col + 1..n {
                let v = a[col * n + j];
                a[r * n + j] -= factor * v;
            }
        }
    }
    Ok(det)
}
