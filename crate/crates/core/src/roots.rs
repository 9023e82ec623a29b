//! Real-root isolation with multiplicities.
//!
//! Each square-free Yun factor is isolated separately by Descartes bisection
//! (Vincent–Collins–Akritas), so multiplicities come for free. Midpoints that
//! hit a root exactly collapse to a degenerate interval [r, r].

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{decimal, default_tolerance, digits_for, int, to_f64, Rat};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rat,
    pub hi: Rat,
    pub multiplicity: u32,
}

impl IsolatedRoot {
    pub fn exact(&self) -> Option<&Rat> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    /// Midpoint printed with as many digits as the interval width justifies.
    pub fn decimal(&self) -> String {
        let w = self.width();
        let digits = if w.is_zero() { 32 } else { digits_for(&w).min(60) };
        decimal(&self.mid(), digits)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Positive roots of q counted by Descartes after mapping (l, r) onto (0, ∞).
fn descartes<F: Field>(f: &Poly<F>, l: &Rat, r: &Rat) -> usize {
    let w = F::from_rat(r - l);
    let p1 = f.shift(&F::from_rat(l.clone())).scale_arg(&w);
    let q = p1.reverse().shift(&F::one());
    let lead_zeros = q.coeffs().iter().take_while(|c| c.is_zero()).count();
    Poly::new(q.coeffs()[lead_zeros..].to_vec()).sign_variations()
}

fn cauchy_bound<F: Field>(f: &Poly<F>) -> Rat {
    let lead = f.leading();
    let mut m = Rat::zero();
    for c in &f.coeffs()[..f.coeffs().len() - 1] {
        let (lo, hi) = (c.clone() / lead.clone()).enclose(&Rat::one());
        let a = if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
        if a > m {
            m = a;
        }
    }
    m.ceil() + Rat::one() + Rat::one()
}

/// Isolate the roots of a square-free f inside the open interval (l, r).
fn isolate_sf<F: Field>(f: &Poly<F>, l: Rat, r: Rat) -> Vec<(Rat, Rat)> {
    let mut found = Vec::new();
    let mut stack = vec![(l, r)];
    while let Some((a, b)) = stack.pop() {
        match descartes(f, &a, &b) {
            0 => {}
            1 => found.push((a, b)),
            _ => {
                let m = (&a + &b) / int(2);
                if f.eval_rat(&m).is_zero() {
                    found.push((m.clone(), m.clone()));
                }
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    found
}

/// Shrink an isolating interval of a square-free f to width ≤ tol.
fn refine<F: Field>(f: &Poly<F>, mut a: Rat, mut b: Rat, tol: &Rat) -> (Rat, Rat) {
    while a != b && &b - &a > *tol {
        let m = (&a + &b) / int(2);
        let fm = f.eval_rat(&m);
        if fm.is_zero() {
            return (m.clone(), m);
        }
        let sa = f.eval_rat(&a).sign();
        let sb = f.eval_rat(&b).sign();
        let left = if sa != 0 {
            sa != fm.sign()
        } else if sb != 0 {
            sb == fm.sign()
        } else {
            descartes(f, &a, &m) == 1
        };
        if left {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}

/// All real roots in the open interval (lo, hi); `None` means unbounded on that side.
pub fn real_roots_between<F: Field>(
    p: &Poly<F>,
    lo: Option<&Rat>,
    hi: Option<&Rat>,
    tol: &Rat,
) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out: Vec<IsolatedRoot> = Vec::new();
    for (factor, mult) in p.yun() {
        let bound = cauchy_bound(&factor);
        let l = match lo {
            Some(x) if *x > -bound.clone() => x.clone(),
            _ => -bound.clone(),
        };
        let r = match hi {
            Some(x) if *x < bound => x.clone(),
            _ => bound.clone(),
        };
        if l >= r {
            continue;
        }
        for (a, b) in isolate_sf(&factor, l, r) {
            let (a, b) = refine(&factor, a, b, tol);
            let (a, b) = snap(&factor, a, b);
            out.push(IsolatedRoot { lo: a, hi: b, multiplicity: mult });
        }
    }
    separate(p, &mut out);
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Collapse the interval when its simplest rational is itself a root.
fn snap<F: Field>(f: &Poly<F>, a: Rat, b: Rat) -> (Rat, Rat) {
    if a == b {
        return (a, b);
    }
    let s = simplest_between(&a, &b);
    if f.eval_rat(&s).is_zero() {
        (s.clone(), s)
    } else {
        (a, b)
    }
}

/// The rational with smallest denominator in [lo, hi] (continued-fraction descent).
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if lo.sign() <= 0 && hi.sign() >= 0 {
        return Rat::zero();
    }
    if hi.sign() < 0 {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl < hi.floor() {
        return fl + Rat::one();
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Roots from different Yun factors are distinct; refine until their intervals are disjoint.
fn separate<F: Field>(p: &Poly<F>, roots: &mut [IsolatedRoot]) {
    let factors = p.yun();
    loop {
        roots.sort_by(|x, y| x.lo.cmp(&y.lo));
        let clash = (1..roots.len()).find(|&i| roots[i].lo <= roots[i - 1].hi);
        let Some(i) = clash else { return };
        for j in [i - 1, i] {
            let f = &factors.iter().find(|(_, k)| *k == roots[j].multiplicity).unwrap().0;
            let tol = roots[j].width() / int(4);
            let (a, b) = refine(f, roots[j].lo.clone(), roots[j].hi.clone(), &tol);
            roots[j].lo = a;
            roots[j].hi = b;
        }
    }
}

/// Roots strictly greater than `bound`, ascending, refined to the default tolerance.
pub fn real_roots_above<F: Field>(p: &Poly<F>, bound: &Rat) -> Result<Vec<IsolatedRoot>> {
    real_roots_between(p, Some(bound), None, &default_tolerance())
}

pub fn real_roots_above_tol<F: Field>(
    p: &Poly<F>,
    bound: &Rat,
    tol: &Rat,
) -> Result<Vec<IsolatedRoot>> {
    real_roots_between(p, Some(bound), None, tol)
}

pub fn all_real_roots<F: Field>(p: &Poly<F>, tol: &Rat) -> Result<Vec<IsolatedRoot>> {
    real_roots_between(p, None, None, tol)
}

/// Refine an isolating interval of p further (p need not be square-free).
pub fn refine_root<F: Field>(p: &Poly<F>, root: &IsolatedRoot, tol: &Rat) -> IsolatedRoot {
    if root.exact().is_some() {
        return root.clone();
    }
    let f = p
        .yun()
        .into_iter()
        .find(|(_, k)| *k == root.multiplicity)
        .map(|(f, _)| f)
        .unwrap_or_else(|| p.square_free());
    let (lo, hi) = refine(&f, root.lo.clone(), root.hi.clone(), tol);
    IsolatedRoot { lo, hi, multiplicity: root.multiplicity }
}
