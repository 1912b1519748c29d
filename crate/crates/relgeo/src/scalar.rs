//! Scalar abstraction over the floating-point type the solvers run in.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the whole library is generic over.
///
/// `f64` is the validated lane; `f32` satisfies the bounds and is useful for
/// quick smoke runs, but the default tolerances are tuned for `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + 'static
{
}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn real<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("literal representable in scalar type")
}
