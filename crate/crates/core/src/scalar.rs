//! Scalar abstraction: every numerical routine in this crate is generic over
//! the floating-point type through this trait.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion back to `f64` (for diagnostics and reports).
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Largest absolute value in a slice (0 for an empty slice).
pub fn sup_norm<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

/// Smallest value in a slice.
pub fn min_value<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::infinity(), |m, &v| m.min(v))
}
