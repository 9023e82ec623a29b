//! The scalar fields the kernel is generic over: Q and real quadratic extensions Q(√d).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::exact::{to_f64, Rat};

/// An ordered subfield of the reals with exact sign decisions.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rat(r: Rat) -> Self;
    /// Exact sign as a real number: -1, 0 or 1.
    fn sign(&self) -> i8;
    fn approx(&self) -> f64;
    /// Rational bracket [lo, hi] containing the value, of width at most `tol`.
    fn enclose(&self, tol: &Rat) -> (Rat, Rat);
    fn as_rat(&self) -> Option<Rat>;

    fn from_int(n: i64) -> Self {
        Self::from_rat(crate::exact::int(n))
    }

    fn magnitude(&self) -> Self {
        if self.sign() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }
}

impl Field for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn approx(&self) -> f64 {
        to_f64(self)
    }
    fn enclose(&self, _tol: &Rat) -> (Rat, Rat) {
        (self.clone(), self.clone())
    }
    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}
