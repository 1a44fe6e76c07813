//! Ordinary and generalized Vandermonde matrices and their determinants.
//!
//! Matrices follow the row convention: entry `(i, j)` is `x_j` raised to the
//! `i`-th exponent, so nodes index columns.

use std::f64::consts::PI;
use std::ops::Deref;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{is_zero, Scalar};

/// Node values `x_1..x_n` defining the columns of a Vandermonde matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeVector<T>(Vec<T>);

impl<T: Scalar> NodeVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self(entries))
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl NodeVector<f64> {
    pub fn to_complex(&self) -> NodeVector<Complex64> {
        NodeVector(self.0.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }
}

impl<T> Deref for NodeVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Exponents `a_1..a_m` defining the rows of a generalized Vandermonde matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentVector<T>(Vec<T>);

impl<T: Scalar> ExponentVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self(entries))
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl ExponentVector<f64> {
    pub fn to_complex(&self) -> ExponentVector<Complex64> {
        ExponentVector(self.0.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }
}

impl<T> Deref for ExponentVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// Fixed branch of the complex logarithm: `log z = ln|z| + i (arg z + 2 pi sheet)`
/// with `arg z` in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LogBranch {
    pub sheet: i64,
}

impl LogBranch {
    pub const PRINCIPAL: LogBranch = LogBranch { sheet: 0 };

    pub fn log(self, z: Complex64) -> Complex64 {
        let principal = z.ln();
        if self.sheet == 0 {
            principal
        } else {
            principal + Complex64::new(0.0, 2.0 * PI * self.sheet as f64)
        }
    }
}

/// `V_mn(x)`: rows `1, x_j, x_j^2, ..., x_j^(m-1)`, with `0^0 = 1`.
pub fn build_vandermonde<T: Scalar>(x: &NodeVector<T>, m: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(m, x.len(), |i, j| x[j].powu(i as u32))
}

/// Generalized matrix with nonnegative integer exponents; plain powering, no logs.
pub fn build_integer_exponent<T: Scalar>(x: &[T], a: &[u32]) -> DenseMatrix<T> {
    DenseMatrix::from_fn(a.len(), x.len(), |i, j| x[j].powu(a[i]))
}

fn as_nonnegative_integer(a: Complex64) -> Option<u32> {
    if a.im == 0.0 && a.re >= 0.0 && a.re.fract() == 0.0 && a.re <= u32::MAX as f64 {
        Some(a.re as u32)
    } else {
        None
    }
}

/// `G_mn(x, a)` with entries `exp(a_i log x_j)` under `branch`.
///
/// Nonnegative integer exponents are applied by repeated multiplication, so
/// zero nodes are allowed as long as every exponent is such an integer.
pub fn build_generalized(
    x: &NodeVector<Complex64>,
    a: &ExponentVector<Complex64>,
    branch: LogBranch,
) -> Result<DenseMatrix<Complex64>> {
    let int_exps: Vec<Option<u32>> = a.iter().map(|&ai| as_nonnegative_integer(ai)).collect();
    if let Some(pos) = int_exps.iter().position(Option::is_none) {
        if let Some(index) = x.iter().position(|&xj| is_zero(xj)) {
            return Err(Error::ZeroNodeWithNonIntegerExponent {
                index,
                exponent: a[pos].to_string(),
            });
        }
    }
    let logs: Vec<Complex64> = x
        .iter()
        .map(|&xj| if is_zero(xj) { Complex64::zero() } else { branch.log(xj) })
        .collect();
    Ok(DenseMatrix::from_fn(a.len(), x.len(), |i, j| match int_exps[i] {
        Some(p) => x[j].powu(p),
        None => (a[i] * logs[j]).exp(),
    }))
}

/// `v_n(x) = prod_{i<j} (x_j - x_i)`.
pub fn det_vandermonde<T: Scalar>(x: &[T]) -> T {
    let mut acc = T::one();
    for j in 1..x.len() {
        for i in 0..j {
            acc *= x[j] - x[i];
        }
    }
    acc
}

/// `log10 |v_n(x)|`, usable where the product itself under- or overflows.
pub fn log10_abs_det_vandermonde(x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for j in 1..x.len() {
        for i in 0..j {
            acc += (x[j] - x[i]).abs().log10();
        }
    }
    acc
}

fn check_distinct<T: Scalar>(x: &[T]) -> Result<()> {
    for j in 1..x.len() {
        for i in 0..j {
            if x[i] == x[j] {
                return Err(Error::RepeatedNodes { i, j });
            }
        }
    }
    Ok(())
}

/// Partial derivatives of `v_n`: `dv/dx_k = sum_{i != k} v_n(x) / (x_k - x_i)`.
pub fn grad_vn<T: Scalar>(x: &[T]) -> Result<Vec<T>> {
    check_distinct(x)?;
    let v = det_vandermonde(x);
    Ok((0..x.len())
        .map(|k| {
            let mut s = T::zero();
            for i in 0..x.len() {
                if i != k {
                    s += v / (x[k] - x[i]);
                }
            }
            s
        })
        .collect())
}

/// Gradient of `log |v_n|`: `sum_{i != k} 1 / (x_k - x_i)`.
///
/// Equals `grad_vn / v_n` but stays finite when `v_n` underflows.
pub fn log_gradient(x: &[f64]) -> Result<Vec<f64>> {
    check_distinct(x)?;
    Ok((0..x.len())
        .map(|k| {
            (0..x.len())
                .filter(|&i| i != k)
                .map(|i| 1.0 / (x[k] - x[i]))
                .sum()
        })
        .collect())
}

/// `e_k(x)`, the sum of all products of `k` distinct entries; `e_0 = 1`.
pub fn elementary_symmetric<T: Scalar>(x: &[T], k: usize) -> Result<T> {
    if k > x.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            limit: x.len(),
        });
    }
    Ok(elementary_symmetric_all(x)[k])
}

/// All of `e_0..e_n` by the product expansion of `prod (1 + x_j z)`.
pub fn elementary_symmetric_all<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); x.len() + 1];
    e[0] = T::one();
    for (j, &xj) in x.iter().enumerate() {
        for k in (1..=j + 1).rev() {
            let prev = e[k - 1];
            e[k] += xj * prev;
        }
    }
    e
}

/// `n (n - 1) / 2`, the degree of `v_n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}
