//! Exact arithmetic in a real quadratic field Q(√d).
//!
//! Cone weights are roots of a rational quadratic, so every downstream quantity
//! (profile coefficients, the Bach numerator, p(r) itself) lives in one Q(√d).
//! Signs are decided exactly by comparing re² against im²·d.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};

use crate::exact::{isqrt, rat_sqrt, Rat};
use crate::field::Field;

/// re + im·√d. When im = 0 the value is rational and d is stored as 0.
#[derive(Clone, Debug)]
pub struct Surd {
    re: Rat,
    im: Rat,
    d: BigInt,
}

impl Surd {
    pub fn rational(r: Rat) -> Self {
        Surd { re: r, im: Rat::zero(), d: BigInt::zero() }
    }

    /// re + im·√d for a non-negative rational d.
    pub fn new(re: Rat, im: Rat, d: &Rat) -> Option<Self> {
        if d.is_negative() {
            return None;
        }
        if im.is_zero() || d.is_zero() {
            return Some(Self::rational(re));
        }
        if let Some(s) = rat_sqrt(d) {
            return Some(Self::rational(re + im * s));
        }
        // √(n/q) = √(nq)/q, then pull small square factors out of nq.
        let mut dd = d.numer() * d.denom();
        let mut im = im / Rat::from_integer(d.denom().clone());
        for p in small_primes() {
            let p2 = BigInt::from(p * p);
            while (&dd % &p2).is_zero() {
                dd /= &p2;
                im *= Rat::from_integer(BigInt::from(p));
            }
        }
        Some(Surd { re, im, d: dd })
    }

    /// √d as a field element.
    pub fn sqrt(d: &Rat) -> Option<Self> {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }
    pub fn im(&self) -> &Rat {
        &self.im
    }
    /// Radicand (square-free up to small primes); 0 for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn conj(&self) -> Self {
        Surd { re: self.re.clone(), im: -self.im.clone(), d: self.d.clone() }
    }

    /// Field norm re² − im²·d.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re - &self.im * &self.im * Rat::from_integer(self.d.clone())
    }

    /// Rewrite both operands over one radicand. Radicands are only square-free up to
    /// small primes, so √d₁ and √d₂ may name the same field: then d₁d₂ = s² and
    /// √d₂ = (s/d₁)·√d₁.
    fn align(a: Surd, b: Surd) -> (Surd, Surd, BigInt) {
        if a.im.is_zero() {
            let d = b.d.clone();
            return (a, b, d);
        }
        if b.im.is_zero() || a.d == b.d {
            let d = a.d.clone();
            return (a, b, d);
        }
        let (small, big) = if a.d < b.d { (a.d.clone(), b.d.clone()) } else { (b.d.clone(), a.d.clone()) };
        let k = Self::ratio(&small, &big)
            .unwrap_or_else(|| panic!("mixed quadratic fields √{} and √{}", a.d, b.d));
        let d = small.clone();
        let conv = |x: Surd| {
            if x.d == small {
                x
            } else {
                Surd { re: x.re, im: x.im * &k, d: d.clone() }
            }
        };
        (conv(a), conv(b), d)
    }

    /// √big / √small when it is rational.
    fn ratio(small: &BigInt, big: &BigInt) -> Option<Rat> {
        let prod = small * big;
        let s = isqrt(&prod);
        (&s * &s == prod).then(|| Rat::new(s, small.clone()))
    }

    fn make(re: Rat, im: Rat, d: BigInt) -> Self {
        if im.is_zero() {
            Self::rational(re)
        } else {
            Surd { re, im, d }
        }
    }
}

fn small_primes() -> impl Iterator<Item = i64> {
    (2..1000i64).filter(|n| (2..*n).take_while(|k| k * k <= *n).all(|k| n % k != 0))
}

impl PartialEq for Surd {
    fn eq(&self, o: &Surd) -> bool {
        if self.re != o.re {
            return false;
        }
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => true,
            (false, false) if self.d == o.d => self.im == o.im,
            (false, false) => {
                let (small, big) = if self.d < o.d { (&self.d, &o.d) } else { (&o.d, &self.d) };
                Self::ratio(small, big).is_some() && (self.clone() - o.clone()).im.is_zero()
            }
            _ => false,
        }
    }
}

impl Eq for Surd {}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            write!(f, "{}*sqrt({})", self.im, self.d)
        } else if self.im.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.re, -self.im.clone(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.re, self.im, self.d)
        }
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        let (x, o, d) = Surd::align(self, o);
        Surd::make(x.re + o.re, x.im + o.im, d)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        let (x, o, d) = Surd::align(self, o);
        Surd::make(x.re - o.re, x.im - o.im, d)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { re: -self.re, im: -self.im, d: self.d }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        let (x, o, d) = Surd::align(self, o);
        let dr = Rat::from_integer(d.clone());
        let re = &x.re * &o.re + &x.im * &o.im * dr;
        let im = &x.re * &o.im + &x.im * &o.re;
        Surd::make(re, im, d)
    }
}

impl Div for Surd {
    type Output = Surd;
    fn div(self, o: Surd) -> Surd {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt d)");
        let t = self * o.conj();
        Surd::make(t.re / &n, t.im / &n, t.d)
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::rational(Rat::one())
    }
}

impl Field for Surd {
    fn from_rat(r: Rat) -> Self {
        Surd::rational(r)
    }
    fn sign(&self) -> i8 {
        let s1 = self.re.sign();
        let s2 = self.im.sign();
        if s2 == 0 {
            return s1;
        }
        if s1 == 0 || s1 == s2 {
            return s2;
        }
        let a = &self.re * &self.re;
        let b = &self.im * &self.im * Rat::from_integer(self.d.clone());
        if a > b {
            s1
        } else {
            s2
        }
    }
    fn approx(&self) -> f64 {
        let (lo, hi) = self.enclose(&Rat::new(BigInt::one(), crate::exact::pow10(24)));
        crate::exact::to_f64(&((lo + hi) / Rat::from_integer(BigInt::from(2))))
    }
    fn enclose(&self, tol: &Rat) -> (Rat, Rat) {
        if self.im.is_zero() {
            return (self.re.clone(), self.re.clone());
        }
        // √d ∈ [s/M, (s+1)/M] with |im|/M ≤ tol.
        let q = self.im.abs() / tol;
        let m = q.ceil().to_integer() + BigInt::one();
        let s = isqrt(&(&self.d * &m * &m));
        let lo = Rat::new(s.clone(), m.clone());
        let hi = Rat::new(s + BigInt::one(), m);
        let (a, b) = (&self.re + &self.im * &lo, &self.re + &self.im * &hi);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
    fn as_rat(&self) -> Option<Rat> {
        self.im.is_zero().then(|| self.re.clone())
    }
}

impl From<Rat> for Surd {
    fn from(r: Rat) -> Self {
        Surd::rational(r)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, o: &Surd) -> Option<std::cmp::Ordering> {
        if self.im.is_zero() || o.im.is_zero() || self.d == o.d || {
            let (small, big) = if self.d < o.d { (&self.d, &o.d) } else { (&o.d, &self.d) };
            Self::ratio(small, big).is_some()
        } {
            return Some((self.clone() - o.clone()).sign().cmp(&0));
        }
        // Distinct irrational fields: the values differ, so enclosures separate them.
        let mut tol = Rat::new(BigInt::one(), BigInt::from(1u64 << 20));
        loop {
            let (alo, ahi) = self.enclose(&tol);
            let (blo, bhi) = o.enclose(&tol);
            if ahi < blo {
                return Some(std::cmp::Ordering::Less);
            }
            if bhi < alo {
                return Some(std::cmp::Ordering::Greater);
            }
            tol = tol / Rat::from_integer(BigInt::from(1u64 << 20));
        }
    }
}
