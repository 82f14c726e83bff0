use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::algebra::AlgebraicNumber;
use crate::error::{Error, Result};

/// Scalars the expansion machinery runs on: exact field elements or `f64`.
pub trait Real:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// -1, 0 or 1.
    fn sign(&self) -> i32;
    fn recip(&self) -> Result<Self>;
    /// Floor of a nonnegative value, if it fits.
    fn floor_u64(&self) -> Option<u64>;
    /// The integer n in the same context as `self`.
    fn int(&self, n: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// True for exact arithmetic.
    fn is_exact() -> bool;

    fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.clone() * o.recip()?)
    }

    /// Rescaling exponent that keeps convergents finite, if any is needed.
    fn overflow_shift(&self) -> Option<i32> {
        None
    }

    fn scale_pow2(&self, _e: i32) -> Self {
        self.clone()
    }
}

impl Real for AlgebraicNumber {
    fn sign(&self) -> i32 {
        self.signum()
    }

    fn recip(&self) -> Result<Self> {
        AlgebraicNumber::recip(self)
    }

    fn floor_u64(&self) -> Option<u64> {
        self.floor().to_u64()
    }

    fn int(&self, n: i64) -> Self {
        AlgebraicNumber::from_int(self.field(), n)
    }

    fn to_f64(&self) -> f64 {
        AlgebraicNumber::to_f64(self)
    }

    fn is_exact() -> bool {
        true
    }
}

impl Real for f64 {
    fn sign(&self) -> i32 {
        if *self > 0.0 {
            1
        } else if *self < 0.0 {
            -1
        } else {
            0
        }
    }

    fn recip(&self) -> Result<Self> {
        if *self == 0.0 {
            Err(Error::Singular("division by zero".into()))
        } else {
            Ok(1.0 / self)
        }
    }

    fn floor_u64(&self) -> Option<u64> {
        let f = self.floor();
        (f.is_finite() && (0.0..1.8e19).contains(&f)).then_some(f as u64)
    }

    fn int(&self, n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }

    fn overflow_shift(&self) -> Option<i32> {
        (self.abs() > 2f64.powi(512)).then_some(-512)
    }

    fn scale_pow2(&self, e: i32) -> Self {
        self * 2f64.powi(e)
    }
}
