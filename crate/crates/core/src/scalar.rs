//! Field abstraction shared by the real and complex kernels.

use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::NumAssign;

/// A real or complex scalar the determinant kernels can operate on.
pub trait Scalar: Copy + Debug + PartialEq + NumAssign + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    /// Absolute value (modulus for complex numbers).
    fn modulus(self) -> f64;
    fn from_f64(v: f64) -> Self;
    fn from_usize(v: usize) -> Self {
        Self::from_f64(v as f64)
    }
    /// Integer power with the `0^0 = 1` convention.
    fn powu(self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }

    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }

    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
}

pub(crate) fn is_zero<T: Scalar>(v: T) -> bool {
    v == T::zero()
}
