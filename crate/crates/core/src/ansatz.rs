//! Profile polynomials of the Calabi ansatz.
//!
//! A metric in the family is fixed by q(r) = q0 + q1 r + (q3/6) r³ + (q4/24) r⁴
//! (factorial convention, no r² term). Everything global is read off
//! p(r) = r² − q(r): it vanishes at r = a with slope am, and at a cone end
//! r = b with slope −bm/weight.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Rat};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct Profile<F: Field = Rat> {
    pub m: u32,
    pub a: Rat,
    pub q0: F,
    pub q1: F,
    pub q3: F,
    pub q4: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeProfile<F: Field = Rat> {
    pub base: Profile<F>,
    pub x: Rat,
    pub b: Rat,
    pub weight: F,
}

/// Affine scalar curvature scal(r) = a0 + a1·r.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarCurvature<F: Field = Rat> {
    pub a0: F,
    pub a1: F,
}

impl<F: Field> ScalarCurvature<F> {
    pub fn at(&self, r: &F) -> F {
        self.a0.clone() + self.a1.clone() * r.clone()
    }
    pub fn poly(&self) -> Poly<F> {
        Poly::new(vec![self.a0.clone(), self.a1.clone()])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EinsteinConstant<F: Field = Rat> {
    /// 12 q4² q1 + 8 q3³ + 48 q3 q4.
    pub from_q: F,
    /// −2 y² (y + 6(m−2)) / a³.
    pub from_y: F,
    pub bach_flat: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VanishingLocus<F: Field = Rat> {
    IdenticallyZero,
    ConstantNonzero(F),
    VanishesAt(F),
    NeverVanishes,
}

impl<F: Field> Profile<F> {
    pub fn m_f(&self) -> F {
        F::from_int(self.m as i64)
    }

    pub fn a_f(&self) -> F {
        F::from_rat(self.a.clone())
    }

    pub fn q_poly(&self) -> Poly<F> {
        Poly::new(vec![
            self.q0.clone(),
            self.q1.clone(),
            F::zero(),
            self.q3.clone() / F::from_int(6),
            self.q4.clone() / F::from_int(24),
        ])
    }

    /// p(r) = r² − q(r).
    pub fn p_poly(&self) -> Poly<F> {
        &Poly::monomial(F::one(), 2) - &self.q_poly()
    }

    /// ṕ(t) = p(a t)/a², which depends on y alone.
    pub fn p_tilde(&self) -> Poly<F> {
        let a = self.a_f();
        self.p_poly().scale_arg(&a).scale(&(a.clone() * a).inv())
    }

    /// y = a·scal(a).
    pub fn y(&self) -> F {
        let a = self.a_f();
        a.clone() * (F::from_int(2) * self.q3.clone() + self.q4.clone() * a)
    }

    pub fn scalar_curvature(&self) -> ScalarCurvature<F> {
        ScalarCurvature { a0: F::from_int(2) * self.q3.clone(), a1: self.q4.clone() }
    }

    /// (p(a), p′(a) − a m); both vanish for every profile built here.
    pub fn residuals_at_a(&self) -> (F, F) {
        let p = self.p_poly();
        let a = self.a_f();
        (p.eval(&a), p.derivative().eval(&a) - a * self.m_f())
    }

    pub fn bach_numerator(&self) -> F {
        self.q3.clone() * self.q1.clone() - self.q4.clone() * self.q0.clone()
    }

    pub fn is_bach_flat(&self) -> bool {
        self.bach_numerator().is_zero()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Profile<G> {
        Profile {
            m: self.m,
            a: self.a.clone(),
            q0: f(&self.q0),
            q1: f(&self.q1),
            q3: f(&self.q3),
            q4: f(&self.q4),
        }
    }
}

impl<F: Field> ConeProfile<F> {
    pub fn angle_over_2pi(&self) -> F {
        self.weight.inv()
    }

    /// (p(b), p′(b) + b m / weight).
    pub fn residuals_at_b(&self) -> (F, F) {
        let p = self.base.p_poly();
        let b = F::from_rat(self.b.clone());
        let slope = b.clone() * self.base.m_f() / self.weight.clone();
        (p.eval(&b), p.derivative().eval(&b) + slope)
    }
}

fn check_params(m: u32, a: &Rat) -> Result<()> {
    if m == 0 {
        return Err(Error::Parameter("m must be a positive integer".into()));
    }
    if !a.is_positive() {
        return Err(Error::Parameter(format!("a must be positive, got {a}")));
    }
    Ok(())
}

/// q3 and q4 from the zero-section data (m, a, s(a)).
pub fn q3_q4_from_scal(m: u32, a: &Rat, s_a: &Rat) -> (Rat, Rat) {
    let (m, y) = (int(m as i64), a * s_a);
    let q3 = s_a * (&y + int(8) * (&m - int(1))) / (int(8) * &m);
    let q4 = -(s_a / a) * (&y + int(4) * (&m - int(2))) / (int(4) * &m);
    (q3, q4)
}

/// The unique Bach-flat profile closing smoothly at r = a with scal(a) = s_a.
pub fn profile_from_local(m: u32, a: &Rat, s_a: &Rat) -> Result<Profile> {
    profile_from_y(m, a, &(a * s_a))
}

/// Same family parametrized by y = a·scal(a), over any field.
pub fn profile_from_y<F: Field>(m: u32, a: &Rat, y: &F) -> Result<Profile<F>> {
    check_params(m, a)?;
    let k = |n: i64| F::from_int(n);
    let mm = m as i64;
    let (af, y) = (F::from_rat(a.clone()), y.clone());
    let q0 = af.clone() * af.clone() * (y.clone() + k(8 * mm - 8)) * (y.clone() + k(12 * mm))
        / k(96 * mm);
    let q1 = -(af.clone() * (y.clone() + k(4 * mm - 8)) * (y.clone() + k(12 * mm))) / k(48 * mm);
    let s_a = y.clone() / af.clone();
    let q3 = s_a.clone() * (y.clone() + k(8 * (mm - 1))) / k(8 * mm);
    let q4 = -(s_a / af) * (y + k(4 * (mm - 2))) / k(4 * mm);
    Ok(Profile { m, a: a.clone(), q0, q1, q3, q4 })
}

/// Each cone coefficient is q_i = lead_i + tail_i / weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeParts {
    pub lead: [Rat; 4],
    pub tail: [Rat; 4],
}

/// Cone coefficients at a = 1 as polynomials in x over the common denominator
/// W = (x−1)²(x²+4x+1). Restoring a multiplies (q0, q1, q3, q4) by (a², a, 1/a, 1/a²).
#[derive(Clone, Debug, PartialEq)]
pub struct ConeNumerators {
    pub lead: [Poly; 4],
    pub tail: [Poly; 4],
    pub w: Poly,
}

pub fn cone_numerators(m: u32) -> ConeNumerators {
    let m = m as i64;
    let p = |c: &[i64]| Poly::<Rat>::from_ints(c);
    let w = &p(&[1, -2, 1]) * &p(&[1, 4, 1]);
    ConeNumerators {
        lead: [
            p(&[0, 0, -1, 2 * m + 2, m - 1]),
            p(&[0, 2, -(3 * m + 2), -(2 * m + 2), -(m - 2)]),
            p(&[6 * (m + 2), 12 * (m - 1), 18 * m - 12, 12]),
            p(&[-24 * (m + 1), 48 * (1 - m), -24]),
        ],
        tail: [
            p(&[0, 0, -m, -2 * m]),
            p(&[0, m, 2 * m, 3 * m]),
            p(&[0, -18 * m, -12 * m, -6 * m]),
            p(&[0, 48 * m, 24 * m]),
        ],
        w,
    }
}

/// Split the closed-form cone coefficients into their weight-independent and 1/weight parts.
pub fn cone_parts(m: u32, a: &Rat, x: &Rat) -> ConeParts {
    let n = cone_numerators(m);
    let w = n.w.eval(x);
    let scale = [a * a, a.clone(), a.recip(), (a * a).recip()];
    let f = |polys: &[Poly; 4]| -> [Rat; 4] {
        std::array::from_fn(|i| polys[i].eval(x) * &scale[i] / &w)
    };
    ConeParts { lead: f(&n.lead), tail: f(&n.tail) }
}

/// Profile closing smoothly at a and with cone weight `weight` along r = b = a·x.
pub fn profile_from_cone<F: Field>(m: u32, a: &Rat, x: &Rat, weight: F) -> Result<ConeProfile<F>> {
    check_params(m, a)?;
    if x <= &Rat::one() {
        return Err(Error::DegeneratePolytope);
    }
    if weight.sign() <= 0 {
        return Err(Error::Parameter(format!("weight must be positive, got {weight}")));
    }
    let parts = cone_parts(m, a, x);
    let u = weight.inv();
    let q = |i: usize| F::from_rat(parts.lead[i].clone()) + F::from_rat(parts.tail[i].clone()) * u.clone();
    let base = Profile { m, a: a.clone(), q0: q(0), q1: q(1), q3: q(2), q4: q(3) };
    Ok(ConeProfile { base, x: x.clone(), b: a * x, weight })
}

/// The weight → ∞ limit of the cone family (the cone angle closes up to zero).
pub fn cone_limit_infinite_weight(m: u32, a: &Rat, x: &Rat) -> Result<Profile> {
    check_params(m, a)?;
    if x <= &Rat::one() {
        return Err(Error::DegeneratePolytope);
    }
    let l = cone_parts(m, a, x).lead;
    Ok(Profile {
        m,
        a: a.clone(),
        q0: l[0].clone(),
        q1: l[1].clone(),
        q3: l[2].clone(),
        q4: l[3].clone(),
    })
}

/// Bach numerator q3 q1 − q4 q0 of the cone family, times weight², as a polynomial in the weight.
pub fn cone_bach_polynomial(m: u32, a: &Rat, x: &Rat) -> Poly<Rat> {
    let ConeParts { lead: l, tail: t } = cone_parts(m, a, x);
    // (l3 + t3 u)(l1 + t1 u) − (l4 + t4 u)(l0 + t0 u), u = 1/p, multiplied by p².
    let p2 = &l[2] * &l[1] - &l[3] * &l[0];
    let p1 = &l[2] * &t[1] + &t[2] * &l[1] - &l[3] * &t[0] - &t[3] * &l[0];
    let p0 = &t[2] * &t[1] - &t[3] * &t[0];
    Poly::new(vec![p0, p1, p2])
}

pub fn is_bach_flat<F: Field>(pr: &Profile<F>) -> bool {
    pr.is_bach_flat()
}

pub fn scalar_curvature<F: Field>(pr: &Profile<F>) -> ScalarCurvature<F> {
    pr.scalar_curvature()
}

/// scal(r) written through y = a·s(a), valid for profiles built by [`profile_from_local`].
pub fn scal_y_form(m: u32, a: &Rat, s_a: &Rat, r: &Rat) -> Rat {
    let mm = int(m as i64);
    let y = a * s_a;
    s_a / (int(4) * &mm) * (&y + int(8) * (&mm - int(1)) - (&y + int(4) * (&mm - int(2))) * r / a)
}

/// −2 y² (y + 6(m−2)) / a³.
pub fn einstein_constant_y_form<F: Field>(m: u32, a: &Rat, y: &F) -> F {
    let shift = F::from_int(6 * (m as i64 - 2));
    let a3 = F::from_rat(a * a * a);
    -(F::from_int(2) * y.clone() * y.clone() * (y.clone() + shift)) / a3
}

/// The y-form exactly as printed, −y² (y + 6(m−2)) / a³; kept to document the factor of 2.
pub fn einstein_constant_printed_y_form(m: u32, a: &Rat, y: &Rat) -> Rat {
    -(y * y * (y + int(6 * (m as i64 - 2)))) / (a * a * a)
}

/// Scalar curvature S of the Einstein metric scal⁻²·g, by two independent formulas.
pub fn einstein_constant<F: Field>(pr: &Profile<F>) -> Result<EinsteinConstant<F>> {
    let (q1, q3, q4) = (pr.q1.clone(), pr.q3.clone(), pr.q4.clone());
    let from_q = F::from_int(12) * q4.clone() * q4.clone() * q1
        + F::from_int(8) * q3.clone() * q3.clone() * q3.clone()
        + F::from_int(48) * q3 * q4;
    let from_y = einstein_constant_y_form(pr.m, &pr.a, &pr.y());
    let bach_flat = pr.is_bach_flat();
    if bach_flat && from_q != from_y {
        return Err(Error::Defect(format!(
            "Einstein constant formulas disagree: {from_q} vs {from_y}"
        )));
    }
    Ok(EinsteinConstant { from_q, from_y, bach_flat })
}

/// Where scal(r) = 2q3 + q4 r vanishes on r > a.
pub fn vanishing_locus<F: Field>(pr: &Profile<F>) -> VanishingLocus<F> {
    let s = pr.scalar_curvature();
    if s.a1.is_zero() {
        return if s.a0.is_zero() {
            VanishingLocus::IdenticallyZero
        } else {
            VanishingLocus::ConstantNonzero(s.a0)
        };
    }
    let r = -(s.a0 / s.a1);
    if (r.clone() - pr.a_f()).sign() > 0 {
        VanishingLocus::VanishesAt(r)
    } else {
        VanishingLocus::NeverVanishes
    }
}

/// r*/a = 1 + 4m/(y + 4(m−2)) from the zero-section data; None when y + 4(m−2) = 0.
pub fn vanishing_ratio(m: u32, y: &Rat) -> Option<Rat> {
    let den = y + int(4 * (m as i64 - 2));
    (!den.is_zero()).then(|| int(1) + int(4 * m as i64) / den)
}

/// Re-express a profile at scale λ: a ↦ λa, s ↦ s/λ.
pub fn rescale(pr: &Profile, lambda: &Rat) -> Profile {
    let l = lambda;
    Profile {
        m: pr.m,
        a: &pr.a * l,
        q0: &pr.q0 * l * l,
        q1: &pr.q1 * l,
        q3: &pr.q3 / l,
        q4: &pr.q4 / (l * l),
    }
}

/// ṕ(t) of a profile, exposed as a free function for the limit tests.
pub fn p_tilde<F: Field>(pr: &Profile<F>) -> Poly<F> {
    pr.p_tilde()
}
