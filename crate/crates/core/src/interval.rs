//! Closed rational intervals, used to certify signs on isolating intervals.

use std::ops::{Add, Mul, Neg, Sub};

use num::{Signed, Zero};

use crate::exact::{int, Rat};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn of<F: Field>(v: &F, tol: &Rat) -> Self {
        let (lo, hi) = v.enclose(tol);
        Interval { lo, hi }
    }

    /// 1 or −1 when the interval excludes zero, 0 otherwise.
    pub fn sign(&self) -> i8 {
        if self.lo.is_positive() {
            1
        } else if self.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    /// Reciprocal; None when the interval straddles zero.
    pub fn recip(&self) -> Option<Self> {
        if self.sign() == 0 {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.recip().map(|r| self.clone() * r)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

/// Enclosure of p over x by Horner; coefficients enclosed to `tol`.
pub fn eval_poly<F: Field>(p: &Poly<F>, x: &Interval, tol: &Rat) -> Interval {
    let mut acc = Interval::point(Rat::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc * x.clone() + Interval::of(c, tol);
    }
    acc
}
