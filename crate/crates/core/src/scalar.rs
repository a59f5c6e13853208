//! Scalar abstraction shared by every formula in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing a complex mass: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Default tolerance for the complex sum-to-one check.
    const SUM_TOLERANCE: f64;

    /// Literal conversion. Panics only if `x` is not representable, which
    /// cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const SUM_TOLERANCE: f64 = 1e-9;
}

impl Real for f32 {
    const SUM_TOLERANCE: f64 = 1e-5;
}

/// `x * log2(x)` with the `0 log 0 = 0` convention.
#[inline]
pub(crate) fn xlog2x<T: Real>(x: T) -> T {
    if x > T::zero() {
        x * x.log2()
    } else {
        T::zero()
    }
}
