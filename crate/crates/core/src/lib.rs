//! Extreme points of the Vandermonde determinant on the unit sphere.
//!
//! The maximizers of `|v_n|` on `S^(n-1)` are the roots of a rescaled Hermite
//! polynomial ([`hermite`]). [`optimizer`] recovers them numerically,
//! [`limits`] relates generalized and ordinary Vandermonde matrices, and
//! [`viz`] exports sphere grids.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod error;
pub mod format;
pub mod hermite;
pub mod limits;
pub mod matrix;
pub mod optimizer;
pub mod scalar;
pub mod tridiag;
pub mod vandermonde;
pub mod viz;

pub use error::{Error, Result};
pub use matrix::{det_general, DenseMatrix};
pub use scalar::Scalar;
pub use vandermonde::{
    build_generalized, build_integer_exponent, build_vandermonde, det_vandermonde, elementary_symmetric, grad_vn,
    ExponentVector, LogBranch, NodeVector,
};
