use thiserror::Error;

use crate::optimizer::OptimizationTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector must have at least one entry")]
    EmptyVector,

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquareMatrix { rows: usize, cols: usize },

    #[error("nodes {i} and {j} coincide; the gradient formula is undefined")]
    RepeatedNodes { i: usize, j: usize },

    #[error("node {index} is zero but exponent {exponent} is not a nonnegative integer")]
    ZeroNodeWithNonIntegerExponent { index: usize, exponent: String },

    #[error("node {index} is zero; its logarithm is undefined")]
    ZeroNode { index: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension {n} is below the minimum {min}")]
    DimensionTooSmall { n: usize, min: usize },

    #[error("dimension {n} is above the supported maximum {max}")]
    DimensionGuard { n: usize, max: usize },

    #[error("root certification failed: {check} residual {residual:e} exceeds {tolerance:e}")]
    RootFindingFailure {
        check: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("{count} extreme points exceed the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("exponent vector has repeated entries (v_n(a) = 0)")]
    DegenerateExponents,

    #[error("dimension {n} is outside the supported range 3..=7")]
    UnsupportedDimension { n: usize },

    #[error("generalized exponents are only supported on 3-dimensional grids (got n = {n})")]
    GeneralizedOnlyFor3D { n: usize },

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no restart converged within the iteration budget")]
    MaxItersExceeded { best: Box<OptimizationTrace> },
}
