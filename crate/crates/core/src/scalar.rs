//! Scalar abstractions.
//!
//! The rearrangement calculus only needs ordered field arithmetic, so it is
//! written against [`Scalar`] and runs unchanged on exact rationals. Anything
//! that takes powers, roots or logarithms needs [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Ordered field element usable by the exact parts of the crate.
pub trait Scalar:
    Num + Neg<Output = Self> + Copy + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Absolute slack allowed when comparing two routes to the same value.
    /// Zero for exact types.
    fn rounding_floor() -> Self;

    fn magnitude(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Floating point scalar (f32 / f64).
pub trait Real: Scalar + Float + FloatConst {
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn rounding_floor() -> Self {
        64.0 * f64::EPSILON
    }
}

impl Scalar for f32 {
    fn rounding_floor() -> Self {
        64.0 * f32::EPSILON
    }
}

impl Real for f64 {}
impl Real for f32 {}

impl Scalar for Ratio<i64> {
    fn rounding_floor() -> Self {
        Ratio::from_integer(0)
    }
}

impl Scalar for Ratio<i128> {
    fn rounding_floor() -> Self {
        Ratio::from_integer(0)
    }
}

/// `x^e` with the common exponents special-cased. Exact for `e == 1`.
pub(crate) fn pow<T: Real>(x: T, e: T) -> T {
    if e == T::one() {
        x
    } else if e == T::lit(0.5) {
        x.sqrt()
    } else if e == T::lit(2.0) {
        x * x
    } else if e == T::zero() {
        T::one()
    } else {
        x.powf(e)
    }
}
