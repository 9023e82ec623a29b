//! Bach-flat cone metrics on Hirzebruch surfaces: the quadratic A p² + B p + C = 0
//! in the cone weight, its admissibility, and the m = 1 / m = 2 / m ≥ 3 trichotomy.

use std::fmt;

use num::Zero;

use crate::ansatz::{cone_bach_polynomial, cone_numerators};
use crate::error::{Error, Result};
use crate::exact::{default_tolerance, int, Rat};
use crate::field::Field;
use crate::identity::{identity_check, IdentityReport};
use crate::poly::Poly;
use crate::roots::{real_roots_above_tol, IsolatedRoot};
use crate::surd::Surd;

fn x_poly(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

/// A, B, C as polynomials in x for a fixed m.
pub fn abc_polys(m: u32) -> (Poly, Poly, Poly) {
    let m = m as i64;
    let a = &x_poly(&[-2, 3 * m, 3 * m, 2]) * &x_poly(&[m + 2, m - 2]);
    let b = x_poly(&[m + 2, 2 * m - 4, 6 * m, 2 * m + 4, m - 2]).scale(&int(-m));
    let c = x_poly(&[0, 1, 2, 1]).scale(&int(3 * m * m));
    (a, b, c)
}

/// The quartic bracket Q₄ with B² − 4AC = m²(x²+4x+1)² Q₄.
pub fn q4_bracket(m: u32) -> Poly {
    let m = m as i64;
    x_poly(&[
        (m + 2) * (m + 2),
        -4 * m * (m + 2),
        -2 * (3 * m * m + 4),
        -4 * m * (m - 2),
        (m - 2) * (m - 2),
    ])
}

pub fn disc_identity(ms: impl IntoIterator<Item = i64>) -> IdentityReport {
    identity_check(
        |m| {
            let (a, b, c) = abc_polys(m as u32);
            &(&b * &b) - &(&a * &c).scale(&int(4))
        },
        |m| (&x_poly(&[1, 4, 1]).pow(2) * &q4_bracket(m as u32)).scale(&int(m * m)),
        ms,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    /// Double root of the quadratic (tangency of the two branches).
    Double,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::Double => "double",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeWeight {
    pub value: Surd,
    pub branch: Branch,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeQuadratic {
    pub m: u32,
    pub x: Rat,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub discriminant: Rat,
    /// Real roots of the quadratic, whatever their sign.
    pub roots: Vec<ConeWeight>,
}

impl ConeQuadratic {
    /// Roots that are admissible as weights (strictly positive).
    pub fn weights(&self) -> Vec<&ConeWeight> {
        self.roots.iter().filter(|w| w.value.sign() > 0).collect()
    }

    pub fn branch(&self, br: Branch) -> Option<&ConeWeight> {
        self.roots.iter().find(|w| w.branch == br)
    }

    /// A p² + B p + C at p.
    pub fn eval<F: Field>(&self, p: &F) -> F {
        let f = |r: &Rat| F::from_rat(r.clone());
        f(&self.a) * p.clone() * p.clone() + f(&self.b) * p.clone() + f(&self.c)
    }

    pub fn poly(&self) -> Poly {
        Poly::new(vec![self.c.clone(), self.b.clone(), self.a.clone()])
    }
}

/// Solve the Bach-flatness quadratic at (m, x).
///
/// Branch labels follow the closed forms: for m = 1, p± = (B ± √disc)/(−2A);
/// for m ≥ 2, p± = (−B ± √disc)/(2A).
pub fn cone_quadratic(m: u32, x: &Rat) -> Result<ConeQuadratic> {
    if m == 0 {
        return Err(Error::Parameter("m must be a positive integer".into()));
    }
    if x <= &int(1) {
        return Err(Error::DegeneratePolytope);
    }
    let (pa, pb, pc) = abc_polys(m);
    let (a, b, c) = (pa.eval(x), pb.eval(x), pc.eval(x));
    let disc = &b * &b - int(4) * &a * &c;
    let mut roots = Vec::new();
    if a.is_zero() {
        if b.is_zero() {
            return Err(Error::Singular(format!("cone quadratic vanishes identically at m = {m}, x = {x}")));
        }
        roots.push(ConeWeight { value: Surd::from(-(&c / &b)), branch: Branch::Plus, multiplicity: 1 });
    } else if disc.is_zero() {
        let r = -(&b / (int(2) * &a));
        roots.push(ConeWeight { value: Surd::from(r), branch: Branch::Double, multiplicity: 2 });
    } else if disc > Rat::zero() {
        let sq = Surd::sqrt(&disc).expect("non-negative");
        let two_a = Surd::from(int(2) * &a);
        let mb = Surd::from(-b.clone());
        let (plus, minus) = if m == 1 {
            ((mb.clone() - sq.clone()) / two_a.clone(), (mb + sq) / two_a)
        } else {
            ((mb.clone() + sq.clone()) / two_a.clone(), (mb - sq) / two_a)
        };
        roots.push(ConeWeight { value: minus, branch: Branch::Minus, multiplicity: 1 });
        roots.push(ConeWeight { value: plus, branch: Branch::Plus, multiplicity: 1 });
    }
    Ok(ConeQuadratic { m, x: x.clone(), a, b, c, discriminant: disc, roots })
}

/// x⁴ + 4x³ − 14x² − 12x + 9, the m = 1 discriminant up to the square factor.
pub fn m1_disc_quartic() -> Poly {
    x_poly(&[9, -12, -14, 4, 1])
}

/// x₀: the unique root of the m = 1 discriminant quartic above 1.
pub fn m1_x0(tol: &Rat) -> Result<IsolatedRoot> {
    let r = real_roots_above_tol(&m1_disc_quartic(), &int(1), tol)?;
    match r.as_slice() {
        [x0] => Ok(x0.clone()),
        _ => Err(Error::Defect(format!("expected one root above 1, found {}", r.len()))),
    }
}

/// The double weight −B/(2A) at x₀, evaluated at the refined midpoint.
pub fn m1_double_weight() -> Result<(IsolatedRoot, Rat)> {
    let x0 = m1_x0(&default_tolerance())?;
    let (pa, pb, _) = abc_polys(1);
    let mid = x0.mid();
    Ok((x0, -(pb.eval(&mid) / (int(2) * pa.eval(&mid)))))
}

#[derive(Clone, Debug, PartialEq)]
pub struct M1Weights {
    pub plus: Surd,
    /// Only on [x₀, 3).
    pub minus: Option<Surd>,
}

/// Closed-form m = 1 weights.
pub fn m1_weights(x: &Rat) -> Result<M1Weights> {
    if x <= &int(1) {
        return Err(Error::DegeneratePolytope);
    }
    let q = m1_disc_quartic().eval(x);
    if q < Rat::zero() {
        return Err(Error::NoSolution(format!("x = {x} lies below x0")));
    }
    if x == &int(3) {
        return Ok(M1Weights { plus: Surd::from(crate::exact::rat(12, 11)), minus: None });
    }
    let num = x_poly(&[-3, 2, -6, -6, 1]).eval(x);
    let den = x_poly(&[12, -22, -12, -6, 4]).eval(x);
    let root = Surd::sqrt(&q).expect("q >= 0") * Surd::from(x_poly(&[1, 4, 1]).eval(x));
    let plus = (Surd::from(num.clone()) + root.clone()) / Surd::from(den.clone());
    let minus = (x < &int(3)).then(|| (Surd::from(num) - root) / Surd::from(den));
    Ok(M1Weights { plus, minus })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NowhereVanishing,
    ConstantScal,
    VanishesInside,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NowhereVanishing => "nowhere-vanishing",
            Verdict::ConstantScal => "constant-scal",
            Verdict::VanishesInside => "vanishes-inside",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility<F: Field = Rat> {
    pub r1: Rat,
    /// Undefined exactly at m = 1, x = 3.
    pub r2: Option<Rat>,
    pub d: Rat,
    pub verdict: Verdict,
    pub weight: F,
}

pub fn r1(m: u32, x: &Rat) -> Rat {
    let m = int(m as i64);
    &m * x * (x + int(1)) / (int(2) * x * (x - int(1)) + &m * (int(3) * x + int(1)))
}

pub fn r2(m: u32, x: &Rat) -> Option<Rat> {
    let m = int(m as i64);
    let den = int(2) - int(2) * x + &m * (x + int(1));
    (!den.is_zero()).then(|| &m * x * (x + int(3)) / den)
}

/// The weight at which q₄ = 0 and the scalar curvature is constant.
pub fn d(m: u32, x: &Rat) -> Rat {
    let m = int(m as i64);
    &m * x * (x + int(2)) / ((x - int(1)) * (x - int(1)) + &m * (int(2) * x + int(1)))
}

pub fn admissibility<F: Field>(m: u32, x: &Rat, weight: &F) -> Result<Admissibility<F>> {
    if x <= &int(1) {
        return Err(Error::DegeneratePolytope);
    }
    if weight.sign() <= 0 {
        return Err(Error::Parameter(format!("weight must be positive, got {weight}")));
    }
    let (lo, hi, dd) = (r1(m, x), r2(m, x), d(m, x));
    let gt = |r: &Rat| (weight.clone() - F::from_rat(r.clone())).sign() > 0;
    let three = int(3);
    let verdict = if (weight.clone() - F::from_rat(dd.clone())).is_zero() {
        Verdict::ConstantScal
    } else {
        let ok = if m > 1 || x < &three {
            let hi = hi.clone().expect("r2 defined away from m = 1, x = 3");
            gt(&lo) && !gt(&hi) && (weight.clone() - F::from_rat(hi)).sign() != 0
        } else if x == &three {
            gt(&crate::exact::rat(6, 11))
        } else {
            gt(&lo)
        };
        if ok {
            Verdict::NowhereVanishing
        } else {
            Verdict::VanishesInside
        }
    };
    Ok(Admissibility { r1: lo, r2: hi, d: dd, verdict, weight: weight.clone() })
}

/// Oracle for [`admissibility`]: the affine scalar curvature of the cone profile on [a, b].
pub fn admissibility_direct<F: Field>(m: u32, x: &Rat, weight: &F) -> Result<Verdict> {
    let cp = crate::ansatz::profile_from_cone(m, &int(1), x, weight.clone())?;
    let s = cp.base.scalar_curvature();
    if s.a1.is_zero() && !s.a0.is_zero() {
        return Ok(Verdict::ConstantScal);
    }
    let sa = s.at(&F::one()).sign();
    let sb = s.at(&F::from_rat(x.clone())).sign();
    Ok(if sa * sb > 0 { Verdict::NowhereVanishing } else { Verdict::VanishesInside })
}

// ---------------------------------------------------------------------------

/// y = a·scal(a) of the cone metric with data (m, x, weight).
pub fn matching_y<F: Field>(m: u32, x: &Rat, weight: &F) -> Result<F> {
    let mm = F::from_int(m as i64);
    let xf = F::from_rat(x.clone());
    let p = weight.clone();
    let den = F::from_rat(x_poly(&[1, 4, 1]).eval(x) * (x - int(1))) * p.clone();
    if den.is_zero() {
        return Err(Error::Singular("matching y: (x²+4x+1)(x−1)p = 0".into()));
    }
    let two = F::from_int(2);
    let num = (two * p.clone() - mm.clone()) * xf.clone() * xf.clone()
        + ((F::from_int(3) * mm.clone() - F::from_int(2)) * p.clone() - mm.clone()) * xf
        + mm * p;
    Ok(F::from_int(12) * num / den)
}

/// The weight → ∞ limit of [`matching_y`].
pub fn matching_y_infinite_weight(m: u32, x: &Rat) -> Result<Rat> {
    let den = x_poly(&[1, 4, 1]).eval(x) * (x - int(1));
    if den.is_zero() {
        return Err(Error::Singular("matching y: x = 1".into()));
    }
    let m = m as i64;
    Ok(int(12) * x_poly(&[m, 3 * m - 2, 2]).eval(x) / den)
}

/// Bach numerator of the cone family is a constant multiple of the quadratic.
pub fn bach_matches_quadratic(m: u32, a: &Rat, x: &Rat) -> Result<bool> {
    let q = cone_quadratic(m, x)?.poly();
    let bach = cone_bach_polynomial(m, a, x);
    if q.is_zero() {
        return Ok(bach.is_zero());
    }
    if bach.is_zero() {
        return Ok(true);
    }
    let (_, rem) = bach.div_rem(&q);
    Ok(rem.is_zero() && bach.degree() == q.degree())
}

// ---------------------------------------------------------------------------

/// ṕ(t) of the x → ∞ limit along 1/weight = k0 + k1·x, exact.
pub fn limit_profile(m: u32, k0: &Rat, k1: &Rat) -> Result<Poly> {
    let n = cone_numerators(m);
    let kx = Poly::new(vec![k0.clone(), k1.clone()]);
    let wdeg = n.w.degree().unwrap();
    let wlead = n.w.leading();
    let mut q = Vec::with_capacity(4);
    for i in 0..4 {
        let num = &n.lead[i] + &(&kx * &n.tail[i]);
        q.push(match num.degree() {
            None => int(0),
            Some(d) if d < wdeg => int(0),
            Some(d) if d == wdeg => num.leading() / &wlead,
            Some(_) => return Err(Error::Singular(format!("coefficient q{i} diverges as x → ∞"))),
        });
    }
    // ṕ(t) = t² − q0 − q1 t − (q3/6) t³ − (q4/24) t⁴ at a = 1
    Ok(Poly::new(vec![
        -q[0].clone(),
        -q[1].clone(),
        int(1),
        -(&q[2] / int(6)),
        -(&q[3] / int(24)),
    ]))
}

/// Limit along the upper branch, weight → m/2.
pub fn limit_profile_plus(m: u32) -> Result<Poly> {
    limit_profile(m, &(int(2) / int(m as i64)), &int(0))
}

/// Limit along the lower branch, weight ~ 3m/((m−2)x).
pub fn limit_profile_minus(m: u32) -> Result<Poly> {
    if m <= 2 {
        return Err(Error::Unsupported("the lower branch limit needs m >= 3".into()));
    }
    let mm = m as i64;
    limit_profile(m, &int(0), &(int(mm - 2) / int(3 * mm)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticRow {
    pub x: Rat,
    pub p_plus: f64,
    pub p_minus: f64,
    /// x²·|p₊ − (m/2 − c₊/x)|
    pub scaled_rem_plus: f64,
    /// x²·|p₋ − c₋/x|
    pub scaled_rem_minus: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightAsymptotics {
    pub m: u32,
    /// p₊ ≈ m/2 − c_plus/x
    pub c_plus: Rat,
    /// p₋ ≈ c_minus/x
    pub c_minus: Rat,
    pub rows: Vec<AsymptoticRow>,
    /// Largest scaled remainder over the grid, for each branch.
    pub bound_plus: f64,
    pub bound_minus: f64,
}

/// Compare the exact weights against their first-order expansions in 1/x.
pub fn weight_asymptotics(m: u32, xs: &[Rat]) -> Result<WeightAsymptotics> {
    if m < 3 {
        return Err(Error::Unsupported("weight asymptotics need m >= 3".into()));
    }
    let mm = int(m as i64);
    let c_plus = (int(3) * &mm * &mm * &mm - int(8) * &mm * &mm + int(8) * &mm) / (int(4) * &mm - int(8));
    let c_minus = int(3) * &mm / (&mm - int(2));
    let mut rows = Vec::new();
    for x in xs {
        if x < &int(100) {
            return Err(Error::Parameter(format!("asymptotic grid needs x >= 100, got {x}")));
        }
        let q = cone_quadratic(m, x)?;
        let plus = q.branch(Branch::Plus).ok_or_else(|| Error::NoSolution(format!("no p+ at x = {x}")))?;
        let minus = q.branch(Branch::Minus).ok_or_else(|| Error::NoSolution(format!("no p- at x = {x}")))?;
        let x2 = Surd::from(x * x);
        let rp = (plus.value.clone() - Surd::from(&mm / int(2) - &c_plus / x)) * x2.clone();
        let rm = (minus.value.clone() - Surd::from(&c_minus / x)) * x2;
        rows.push(AsymptoticRow {
            x: x.clone(),
            p_plus: plus.value.approx(),
            p_minus: minus.value.approx(),
            scaled_rem_plus: rp.magnitude().approx(),
            scaled_rem_minus: rm.magnitude().approx(),
        });
    }
    let bound_plus = rows.iter().map(|r| r.scaled_rem_plus).fold(0.0, f64::max);
    let bound_minus = rows.iter().map(|r| r.scaled_rem_minus).fold(0.0, f64::max);
    Ok(WeightAsymptotics { m, c_plus, c_minus, rows, bound_plus, bound_minus })
}

// ---------------------------------------------------------------------------

/// One row of a cone sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub quadratic: ConeQuadratic,
    pub r1: Rat,
    pub r2: Option<Rat>,
    pub d: Rat,
    pub minus: Option<(Surd, Verdict)>,
    pub plus: Option<(Surd, Verdict)>,
}

pub fn sweep_row(m: u32, x: &Rat) -> Result<SweepRow> {
    let q = cone_quadratic(m, x)?;
    let verdict = |br: Branch| -> Result<Option<(Surd, Verdict)>> {
        let w = q.branch(br).or_else(|| q.branch(Branch::Double));
        match w {
            Some(w) if w.value.sign() > 0 => {
                Ok(Some((w.value.clone(), admissibility(m, x, &w.value)?.verdict)))
            }
            _ => Ok(None),
        }
    };
    let minus = verdict(Branch::Minus)?;
    let plus = verdict(Branch::Plus)?;
    Ok(SweepRow { r1: r1(m, x), r2: r2(m, x), d: d(m, x), minus, plus, quadratic: q })
}
