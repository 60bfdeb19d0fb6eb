//! Scalar abstraction for the numeric kernel.

use std::fmt::{Debug, Display};

use num_traits::Float;

/// Floating-point scalar the LP kernel and yield algebra are generic over.
///
/// `f64` is the working type everywhere in the model layer; `f32` works for
/// the kernel itself and is exercised in tests to keep the bound honest.
pub trait Scalar: Float + Debug + Display + Default + 'static {
    /// Lift an `f64` constant into the scalar type.
    fn c(v: f64) -> Self;

    /// Round-trip to `f64` for reporting.
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn c(v: f64) -> Self {
        v
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn c(v: f64) -> Self {
        v as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}
