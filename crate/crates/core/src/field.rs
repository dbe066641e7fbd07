//! Scalar abstraction shared by the `f64`, [`HpFloat`] and exact rational
//! evaluation paths of the smooth profile functions.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::hp::HpFloat;

/// Ordered field operations plus construction of rational constants in the
/// "same context" (precision) as an existing value.
pub trait Field:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn ratio(&self, num: i64, den: i64) -> Self;

    fn int(&self, v: i64) -> Self {
        self.ratio(v, 1)
    }

    fn zero_like(&self) -> Self {
        self.ratio(0, 1)
    }
}

/// A [`Field`] with the transcendental functions needed by the bounds.
pub trait Real: Field {
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Field for f64 {
    fn ratio(&self, num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Real for f64 {
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for HpFloat {
    fn ratio(&self, num: i64, den: i64) -> Self {
        HpFloat::from_ratio(&BigInt::from(num), &BigInt::from(den), self.prec())
    }
}

impl Real for HpFloat {
    fn ln(&self) -> Self {
        HpFloat::ln(self)
    }
    fn exp(&self) -> Self {
        HpFloat::exp(self)
    }
    fn sqrt(&self) -> Self {
        HpFloat::sqrt(self)
    }
    fn to_f64(&self) -> f64 {
        HpFloat::to_f64(self)
    }
}

impl Field for BigRational {
    fn ratio(&self, num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}
