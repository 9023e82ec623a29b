//! Dense univariate polynomials over an exact field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exact::{int, Rat};
use crate::field::Field;

/// Coefficients in ascending degree; never carries a trailing zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field = Rat> {
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(v: F) -> Self {
        Self::new(vec![v])
    }

    /// The monomial c·t^k.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// t − r.
    pub fn linear_root(r: F) -> Self {
        Self::new(vec![-r, F::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&n| F::from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    /// Coefficient of t^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.c.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_rat(&self, x: &Rat) -> F {
        self.eval(&F::from_rat(x.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * F::from_int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::new(self.c.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// p(k·t).
    pub fn scale_arg(&self, k: &F) -> Self {
        let mut pw = F::one();
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(c.clone() * pw.clone());
            pw = pw * k.clone();
        }
        Self::new(out)
    }

    /// p(t + s), by repeated synthetic division (Taylor shift).
    pub fn shift(&self, s: &F) -> Self {
        let mut a = self.c.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].clone() * s.clone();
                a[j] = a[j].clone() + t;
            }
        }
        Self::new(a)
    }

    /// t^n p(1/t) for n = degree.
    pub fn reverse(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// p(q(t)).
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * q) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.c.iter().map(f).collect())
    }

    /// Euclidean division: self = q·d + r with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dn = d.c.len() - 1;
        let lead = d.leading();
        let mut r = self.c.clone();
        if r.len() <= dn {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dn];
        for k in (0..q.len()).rev() {
            let coef = r[k + dn].clone() / lead.clone();
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - coef.clone() * dc.clone();
                }
            }
            q[k] = coef;
        }
        r.truncate(dn);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic square-free part.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's algorithm: monic square-free, pairwise coprime factors with their multiplicities.
    pub fn yun(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), i));
            }
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Number of sign changes in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for c in &self.c {
            let s = c.sign();
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }
}

impl Poly<Rat> {
    /// Resultant by exact elimination on the Sylvester matrix.
    pub fn resultant(&self, other: &Self) -> Rat {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return int(0),
        };
        if m + n == 0 {
            return int(1);
        }
        let size = m + n;
        let mut s = vec![vec![int(0); size]; size];
        for i in 0..n {
            for (j, c) in self.c.iter().rev().enumerate() {
                s[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in other.c.iter().rev().enumerate() {
                s[n + i][i + j] = c.clone();
            }
        }
        crate::linalg::det(s)
    }

    /// (−1)^{n(n−1)/2} Res(p, p′) / a_n.
    pub fn discriminant(&self) -> Result<Rat> {
        let n = self.degree().ok_or(Error::ZeroPolynomial)?;
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        let r = self.resultant(&self.derivative()) / self.leading();
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.c.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $f(self, o: Poly<F>) -> Poly<F> {
                (&self).$f(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}
