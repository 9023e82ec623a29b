//! Global behaviour of a profile: which compactification, if any, the metric admits.
//!
//! The decision only looks at p(r) on r > a: its degree, its smallest root b
//! above a and that root's multiplicity.

use std::fmt;

use num::Zero;

use crate::ansatz::Profile;
use crate::error::{Error, Result};
use crate::exact::{default_tolerance, int, Rat};
use crate::field::Field;
use crate::interval::{eval_poly, Interval};
use crate::poly::Poly;
use crate::roots::{all_real_roots, real_roots_above_tol, refine_root, IsolatedRoot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    IncompleteEnd,
    CompleteQuarticGrowth,
    CompleteExponentialGrowth,
    ConeAngleCompactification,
    CompleteFiniteVolume,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::IncompleteEnd => "IncompleteEnd",
            Kind::CompleteQuarticGrowth => "CompleteQuarticGrowth",
            Kind::CompleteExponentialGrowth => "CompleteExponentialGrowth",
            Kind::ConeAngleCompactification => "ConeAngleCompactification",
            Kind::CompleteFiniteVolume => "CompleteFiniteVolume",
        };
        f.write_str(s)
    }
}

/// A real number known either exactly or through a rational enclosure.
#[derive(Clone, Debug, PartialEq)]
pub enum Value<F: Field = Rat> {
    Exact(F),
    Enclosed(Interval),
}

impl<F: Field> Value<F> {
    pub fn approx(&self) -> f64 {
        match self {
            Value::Exact(v) => v.approx(),
            Value::Enclosed(i) => crate::exact::to_f64(&i.mid()),
        }
    }

    pub fn exact(&self) -> Option<&F> {
        match self {
            Value::Exact(v) => Some(v),
            Value::Enclosed(_) => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Value::Exact(v) => v.approx() == x,
            Value::Enclosed(i) => crate::exact::to_f64(&i.lo) <= x && x <= crate::exact::to_f64(&i.hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<F: Field = Rat> {
    pub kind: Kind,
    pub p_degree: usize,
    /// Every root of p strictly above a, ascending.
    pub roots: Vec<IsolatedRoot>,
    pub b: Option<IsolatedRoot>,
    /// −m b / p′(b) for a simple root b.
    pub weight: Option<Value<F>>,
    /// 1 / weight; the cone angle is 2π times this.
    pub angle_over_2pi: Option<Value<F>>,
}

pub fn classify<F: Field>(pr: &Profile<F>) -> Result<Classification<F>> {
    classify_tol(pr, &default_tolerance())
}

pub fn classify_tol<F: Field>(pr: &Profile<F>, tol: &Rat) -> Result<Classification<F>> {
    let p = pr.p_poly();
    let deg = p.degree().ok_or(Error::DegenerateProfile)?;
    if deg < 2 {
        return Err(Error::DegenerateProfile);
    }
    let a = &pr.a;
    let roots = real_roots_above_tol(&p, a, tol)?;
    let Some(first) = roots.first().cloned() else {
        check_positive(&p, &(a + int(1)))?;
        let kind = match deg {
            2 => Kind::CompleteQuarticGrowth,
            3 => Kind::CompleteExponentialGrowth,
            _ => Kind::IncompleteEnd,
        };
        return Ok(Classification { kind, p_degree: deg, roots, b: None, weight: None, angle_over_2pi: None });
    };
    let mut b = first;
    while &b.lo <= a {
        let w = b.width() / int(2);
        b = refine_root(&p, &b, &w);
    }
    check_positive(&p, &((a + &b.lo) / int(2)))?;
    if b.multiplicity > 1 {
        return Ok(Classification {
            kind: Kind::CompleteFiniteVolume,
            p_degree: deg,
            roots,
            b: Some(b),
            weight: None,
            angle_over_2pi: None,
        });
    }
    let (weight, angle) = cone_weight(pr, &p, &mut b, tol)?;
    Ok(Classification {
        kind: Kind::ConeAngleCompactification,
        p_degree: deg,
        roots,
        b: Some(b),
        weight: Some(weight),
        angle_over_2pi: Some(angle),
    })
}

fn check_positive<F: Field>(p: &Poly<F>, at: &Rat) -> Result<()> {
    if p.eval_rat(at).sign() > 0 {
        Ok(())
    } else {
        Err(Error::Convexity(at.to_string()))
    }
}

/// Weight and reciprocal weight at a simple root, with the sign of p′(b) certified.
fn cone_weight<F: Field>(
    pr: &Profile<F>,
    p: &Poly<F>,
    b: &mut IsolatedRoot,
    tol: &Rat,
) -> Result<(Value<F>, Value<F>)> {
    let dp = p.derivative();
    let m = pr.m_f();
    if let Some(bx) = b.exact() {
        let slope = dp.eval_rat(bx);
        if slope.sign() >= 0 {
            return Err(Error::Convexity(bx.to_string()));
        }
        let w = -(m * F::from_rat(bx.clone())) / slope;
        return Ok((Value::Exact(w.clone()), Value::Exact(w.inv())));
    }
    let mut coef_tol = tol.clone();
    loop {
        let bi = Interval::new(b.lo.clone(), b.hi.clone());
        let slope = eval_poly(&dp, &bi, &coef_tol);
        match slope.sign() {
            -1 => {
                let mi = Interval::of(&pr.m_f(), &coef_tol);
                let w = (-(mi * bi.clone())).div(&slope).expect("slope excludes zero");
                let ang = (-slope).div(&(Interval::of(&pr.m_f(), &coef_tol) * bi)).expect("b > 0");
                return Ok((Value::Enclosed(w), Value::Enclosed(ang)));
            }
            1 => return Err(Error::Convexity(crate::exact::decimal(&b.mid(), 20))),
            _ => {
                let w = b.width() / int(16);
                if w.is_zero() {
                    return Err(Error::Defect("zero-width root with unresolved slope".into()));
                }
                *b = refine_root(p, b, &w);
                coef_tol /= int(16);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Moduli atlas for m ≥ 3.

/// v(y) = y³ + 6(3m−2)y² + 72m(m−2)y + 256.
pub fn v_poly(m: u32) -> Poly {
    let m = m as i64;
    Poly::from_ints(&[256, 72 * m * (m - 2), 6 * (3 * m - 2), 1])
}

/// The seven special values of y, in their nominal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    Y1,
    Minus12m,
    RicciFlat,
    Y2,
    KahlerEinstein,
    Y3,
    ScalarFlat,
}

impl Boundary {
    pub const ALL: [Boundary; 7] = [
        Boundary::Y1,
        Boundary::Minus12m,
        Boundary::RicciFlat,
        Boundary::Y2,
        Boundary::KahlerEinstein,
        Boundary::Y3,
        Boundary::ScalarFlat,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Boundary::Y1 => "y1",
            Boundary::Minus12m => "-12m",
            Boundary::RicciFlat => "-6(m-2)",
            Boundary::Y2 => "y2",
            Boundary::KahlerEinstein => "-4(m-2)",
            Boundary::Y3 => "y3",
            Boundary::ScalarFlat => "0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    At(Boundary),
    /// Open interval between consecutive boundaries; None means ∓∞.
    Between(Option<Boundary>, Option<Boundary>),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::At(b) => f.write_str(b.label()),
            Location::Between(lo, hi) => write!(
                f,
                "({}, {})",
                lo.map_or("-inf", |b| b.label()),
                hi.map_or("inf", |b| b.label())
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    TotalSpace,
    Hirzebruch,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::TotalSpace => "O(-m)",
            Space::Hirzebruch => "H_m",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricType {
    Incomplete,
    ConeAngle,
    ScalarFlat,
    KahlerEinstein,
}

impl fmt::Display for MetricType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricType::Incomplete => "incomplete",
            MetricType::ConeAngle => "cone-angle",
            MetricType::ScalarFlat => "scalar-flat",
            MetricType::KahlerEinstein => "kahler-einstein",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    NotApplicable,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
            Sign::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasRegion {
    pub m: u32,
    pub y: Rat,
    pub location: Location,
    /// Other boundaries that coincide with `location` (y₂ = −4(m−2) when m = 3).
    pub coincident: Vec<Boundary>,
    pub space: Space,
    pub metric_type: MetricType,
    /// Sign of the scalar curvature of scal⁻²·g, from the exact Einstein constant.
    pub einstein_scalar_sign: Sign,
}

/// The boundary values for a given m, with y₁ < y₂ < y₃ isolated to `tol`.
pub fn atlas_boundaries(m: u32, tol: &Rat) -> Result<Vec<(Boundary, IsolatedRoot)>> {
    if m < 3 {
        return Err(Error::Unsupported(format!("the atlas covers m >= 3, got m = {m}")));
    }
    let v = all_real_roots(&v_poly(m), tol)?;
    if v.len() != 3 {
        return Err(Error::Defect(format!("v has {} real roots for m = {m}", v.len())));
    }
    let mi = m as i64;
    let pt = |x: i64| IsolatedRoot { lo: int(x), hi: int(x), multiplicity: 1 };
    Ok(vec![
        (Boundary::Y1, v[0].clone()),
        (Boundary::Minus12m, pt(-12 * mi)),
        (Boundary::RicciFlat, pt(-6 * (mi - 2))),
        (Boundary::Y2, v[1].clone()),
        (Boundary::KahlerEinstein, pt(-4 * (mi - 2))),
        (Boundary::Y3, v[2].clone()),
        (Boundary::ScalarFlat, pt(0)),
    ])
}

/// Strict ordering y₁ < −12m < −6(m−2) < y₂ < −4(m−2) < y₃ < 0, decided exactly.
pub fn atlas_ordering_holds(m: u32) -> Result<bool> {
    let bs = atlas_boundaries(m, &default_tolerance())?;
    let v = v_poly(m);
    for w in bs.windows(2) {
        if cmp_roots(&v, &w[0].1, &w[1].1) != std::cmp::Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmp_roots(v: &Poly, x: &IsolatedRoot, y: &IsolatedRoot) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return a.cmp(b);
    }
    if let Some(a) = x.exact() {
        return cmp_point(v, a, y);
    }
    if let Some(b) = y.exact() {
        return cmp_point(v, b, x).reverse();
    }
    if x.hi < y.lo {
        Less
    } else if y.hi < x.lo {
        Greater
    } else {
        Equal
    }
}

/// Compare a rational y with a root of v.
fn cmp_point(v: &Poly, y: &Rat, root: &IsolatedRoot) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    if let Some(r) = root.exact() {
        return y.cmp(r);
    }
    if v.eval(y).is_zero() && root.contains(y) {
        return Equal;
    }
    let mut r = root.clone();
    loop {
        if y < &r.lo {
            return Less;
        }
        if y > &r.hi {
            return Greater;
        }
        let w = r.width() / int(4);
        r = refine_root(v, &r, &w);
        if let Some(e) = r.exact() {
            return y.cmp(e);
        }
    }
}

pub fn atlas_region(m: u32, y: &Rat) -> Result<AtlasRegion> {
    atlas_region_in(m, y, &atlas_boundaries(m, &default_tolerance())?)
}

/// [`atlas_region`] against boundaries computed once by [`atlas_boundaries`].
pub fn atlas_region_in(m: u32, y: &Rat, bs: &[(Boundary, IsolatedRoot)]) -> Result<AtlasRegion> {
    if bs.len() != 7 {
        return Err(Error::Parameter("expected the seven atlas boundaries".into()));
    }
    let v = v_poly(m);
    let mut at: Vec<Boundary> = Vec::new();
    let mut below: Option<Boundary> = None;
    let mut above: Option<Boundary> = None;
    for (b, r) in bs {
        match cmp_point(&v, y, r) {
            std::cmp::Ordering::Equal => at.push(*b),
            std::cmp::Ordering::Greater => below = Some(*b),
            std::cmp::Ordering::Less => {
                if above.is_none() {
                    above = Some(*b);
                }
            }
        }
    }
    let mi = int(m as i64);
    let ke = -(int(4) * (&mi - int(2)));
    let location = if let Some(&first) = at.iter().max() {
        Location::At(first)
    } else {
        Location::Between(below, above)
    };
    let coincident = match location {
        Location::At(b) => at.iter().copied().filter(|c| *c != b).collect(),
        _ => vec![],
    };
    let space = if y > &ke && y < &Rat::zero() { Space::Hirzebruch } else { Space::TotalSpace };
    let metric_type = if y == &ke {
        MetricType::KahlerEinstein
    } else if y.is_zero() {
        MetricType::ScalarFlat
    } else if space == Space::Hirzebruch {
        MetricType::ConeAngle
    } else {
        MetricType::Incomplete
    };
    let einstein_scalar_sign = if y.is_zero() {
        Sign::NotApplicable
    } else {
        let s = crate::ansatz::einstein_constant_y_form(m, &int(1), y);
        match s.sign() {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    };
    Ok(AtlasRegion { m, y: y.clone(), location, coincident, space, metric_type, einstein_scalar_sign })
}

/// Classification kind the atlas predicts for a profile with parameter y.
pub fn expected_kind(region: &AtlasRegion) -> Kind {
    match region.metric_type {
        MetricType::Incomplete => Kind::IncompleteEnd,
        MetricType::ConeAngle => Kind::ConeAngleCompactification,
        MetricType::ScalarFlat => Kind::CompleteQuarticGrowth,
        MetricType::KahlerEinstein => Kind::CompleteExponentialGrowth,
    }
}

// ---------------------------------------------------------------------------

/// Edge-cone Hitchin–Thorpe on CP²#(−CP²): 8 ≥ (1−β)(4 ± (1+β)) for both signs.
pub fn hitchin_thorpe(beta_over_2pi: f64) -> bool {
    if !(beta_over_2pi > 0.0) {
        return false;
    }
    let b = beta_over_2pi;
    8.0 >= (1.0 - b) * (4.0 + (1.0 + b)) && 8.0 >= (1.0 - b) * (4.0 - (1.0 + b))
}

pub fn hitchin_thorpe_exact(beta_over_2pi: &Rat) -> bool {
    let b = beta_over_2pi;
    if b <= &Rat::zero() {
        return false;
    }
    let one = int(1);
    let lhs = |s: i64| (&one - b) * (int(4) + int(s) * (&one + b));
    int(8) >= lhs(1) && int(8) >= lhs(-1)
}
