//! Floating-point abstraction for the numeric kernel.
//!
//! Everything downstream (channel model, series arithmetic, truncation,
//! polytopes, the resultant solver) is generic over [`Scalar`] so the same
//! code runs in `f32` and `f64`. Concrete aliases for the common `f64`
//! instantiation live at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type the kernel is generic over.
///
/// The bound is deliberately thin: IEEE float semantics from `num_traits`,
/// constants (`PI`, `LN_2`), conversion from primitives for tolerances, and
/// the handful of std traits the containers need. `NumAssign` lets complex
/// values built on the scalar use compound assignment too.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// `10^n`, used for tolerance thresholds expressed in decimal digits.
    fn exp10(n: i32) -> Self {
        Self::from_f64(10.0).unwrap().powi(n)
    }

    /// Lossy conversion from `f64`; panics only for types that cannot
    /// represent ordinary finite doubles, which none of our instances are.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
