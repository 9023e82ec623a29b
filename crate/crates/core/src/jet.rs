//! Truncated Taylor series in two variables (x₁, x₂) about a rational point.
//!
//! A jet of order k stores c_ij for i + j ≤ k, the coefficients of dx₁^i dx₂^j.
//! Products truncate to the smaller order; differentiation drops one order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::poly::Poly;

#[derive(Clone, PartialEq)]
pub struct Jet {
    order: usize,
    c: Vec<Rat>,
}

fn idx(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

fn len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl Jet {
    pub fn constant(order: usize, v: Rat) -> Self {
        let mut c = vec![Rat::zero(); len(order)];
        c[0] = v;
        Jet { order, c }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(order, Rat::zero())
    }

    /// The coordinate x_{which} (0 or 1) about the value `at`.
    pub fn var(order: usize, which: usize, at: Rat) -> Self {
        let mut j = Self::constant(order, at);
        if order > 0 {
            j.c[if which == 0 { idx(1, 0) } else { idx(0, 1) }] = Rat::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> &Rat {
        &self.c[0]
    }

    pub fn coeff(&self, i: usize, j: usize) -> &Rat {
        &self.c[idx(i, j)]
    }

    /// ∂^{i+j} / ∂x₁^i ∂x₂^j at the base point.
    pub fn deriv(&self, i: usize, j: usize) -> Rat {
        assert!(i + j <= self.order, "derivative beyond jet order");
        let f = |n: usize| (1..=n).fold(Rat::one(), |acc, k| acc * Rat::from_integer(k.into()));
        &self.c[idx(i, j)] * f(i) * f(j)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Jet { order, c: self.c[..len(order)].to_vec() }
    }

    /// ∂/∂x_{which}, one order lower.
    pub fn partial(&self, which: usize) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let k = self.order - 1;
        let mut out = Self::zero(k);
        for n in 0..=k {
            for j in 0..=n {
                let i = n - j;
                let (src, mult) = if which == 0 { (idx(i + 1, j), i + 1) } else { (idx(i, j + 1), j + 1) };
                out.c[idx(i, j)] = &self.c[src] * Rat::from_integer(mult.into());
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Jet { order: self.order, c: self.c.iter().map(|x| x * k).collect() }
    }

    pub fn recip(&self) -> Result<Self> {
        let v = self.value();
        if v.is_zero() {
            return Err(Error::Singular("reciprocal of a jet vanishing at the base point".into()));
        }
        let inv = v.recip();
        // 1/(v(1 + e)) = (1/v) Σ (−e)^n
        let mut e = self.scale(&inv);
        e.c[0] = Rat::zero();
        let ne = -&e;
        let mut term = Self::constant(self.order, Rat::one());
        let mut acc = term.clone();
        for _ in 0..self.order {
            term = &term * &ne;
            acc = &acc + &term;
        }
        Ok(acc.scale(&inv))
    }

    pub fn div(&self, o: &Jet) -> Result<Self> {
        Ok(self * &o.recip()?)
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut out = Self::constant(self.order, Rat::one());
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// p(self) by Horner's rule.
    pub fn eval_poly(p: &Poly, x: &Jet) -> Jet {
        let mut acc = Self::zero(x.order);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * x) + &Self::constant(x.order, c.clone());
        }
        acc
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{}[", self.order)?;
        for (k, c) in self.c.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        Jet { order, c: (0..len(order)).map(|k| &self.c[k] + &o.c[k]).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        Jet { order, c: (0..len(order)).map(|k| &self.c[k] - &o.c[k]).collect() }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { order: self.order, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut out = Jet::zero(order);
        for n1 in 0..=order {
            for j1 in 0..=n1 {
                let a = &self.c[idx(n1 - j1, j1)];
                if a.is_zero() {
                    continue;
                }
                for n2 in 0..=(order - n1) {
                    for j2 in 0..=n2 {
                        let b = &o.c[idx(n2 - j2, j2)];
                        if b.is_zero() {
                            continue;
                        }
                        let k = idx(n1 - j1 + n2 - j2, j1 + j2);
                        out.c[k] += a * b;
                    }
                }
            }
        }
        out
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $f(self, o: Jet) -> Jet {
                (&self).$f(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);
