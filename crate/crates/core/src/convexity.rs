//! Positivity of p(r) on (a, b), which is what convexity of the symplectic
//! potential reduces to, plus the α/β case analysis as an independent check.

use std::fmt;

use num::Zero;

use crate::ansatz::{profile_from_cone, ConeProfile, Profile};
use crate::error::{Error, Result};
use crate::exact::{default_tolerance, int, Rat};
use crate::field::Field;
use crate::poly::Poly;
use crate::roots::{real_roots_between, simplest_between, IsolatedRoot};
use crate::surd::Surd;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// No root of p in (a, b), decided by exact root isolation.
    RootFree,
    /// A point of (a, b) where p ≤ 0.
    Witness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCertificate {
    pub positive: bool,
    pub method: Method,
    pub a: Rat,
    pub b: Rat,
    /// Multiplicities of the roots at the two ends.
    pub end_multiplicity: (u32, u32),
    /// Roots strictly inside (a, b); empty when positive.
    pub interior_roots: Vec<IsolatedRoot>,
    /// A rational point where p ≤ 0, when not positive.
    pub witness: Option<Rat>,
}

impl PositivityCertificate {
    /// Re-check: p is positive at n interior grid points whenever the certificate says so.
    pub fn recheck<F: Field>(&self, p: &Poly<F>, n: usize) -> bool {
        if !self.positive {
            return self.witness.as_ref().is_some_and(|w| p.eval_rat(w).sign() <= 0);
        }
        let len = &self.b - &self.a;
        (1..=n).all(|i| {
            let r = &self.a + &len * Rat::new((i as i64).into(), (n as i64 + 1).into());
            p.eval_rat(&r).sign() > 0
        })
    }
}

fn deflate<F: Field>(p: &Poly<F>, at: &Rat) -> (Poly<F>, u32) {
    let lin = Poly::linear_root(F::from_rat(at.clone()));
    let mut q = p.clone();
    let mut k = 0;
    while !q.is_zero() && q.eval_rat(at).is_zero() {
        q = q.div_rem(&lin).0;
        k += 1;
    }
    (q, k)
}

/// Certify p > 0 on the open interval (a, b).
pub fn certify_positive_on<F: Field>(p: &Poly<F>, a: &Rat, b: &Rat) -> Result<PositivityCertificate> {
    if a >= b {
        return Err(Error::Parameter(format!("empty interval ({a}, {b})")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (q, ka) = deflate(p, a);
    let (q, kb) = deflate(&q, b);
    let inside = real_roots_between(&q, Some(a), Some(b), &default_tolerance())?;
    let base = PositivityCertificate {
        positive: false,
        method: Method::Witness,
        a: a.clone(),
        b: b.clone(),
        end_multiplicity: (ka, kb),
        interior_roots: vec![],
        witness: None,
    };
    if let Some(r) = inside.first() {
        let w = r.exact().cloned().unwrap_or_else(|| r.mid());
        return Ok(PositivityCertificate { interior_roots: inside, witness: Some(w), ..base });
    }
    // no sign change inside, so one sample decides
    let mid = simplest_between(&((a * int(3) + b) / int(4)), &((a + b * int(3)) / int(4)));
    if p.eval_rat(&mid).sign() > 0 {
        Ok(PositivityCertificate { positive: true, method: Method::RootFree, ..base })
    } else {
        Ok(PositivityCertificate { witness: Some(mid), ..base })
    }
}

/// Certify p > 0 strictly between the two pinned ends of a cone profile.
pub fn certify_positive<F: Field>(cp: &ConeProfile<F>) -> Result<PositivityCertificate> {
    certify_positive_on(&cp.base.p_poly(), &cp.base.a, &cp.b)
}

// ---------------------------------------------------------------------------
// Hessian of the symplectic potential at an interior point.

/// Hess(u) = ½[[1/x₁ + h″, h″], [h″, 1/x₂ + h″]] with h″ = −1/r + r/p(r).
pub fn hessian_u<F: Field>(pr: &Profile<F>, x1: &Rat, x2: &Rat) -> Result<[[F; 2]; 2]> {
    let r = x1 + x2;
    let p = pr.p_poly().eval_rat(&r);
    if p.is_zero() || x1.is_zero() || x2.is_zero() {
        return Err(Error::Singular(format!("Hess(u) at ({x1}, {x2})")));
    }
    let rf = F::from_rat(r.clone());
    let h2 = -(rf.inv()) + rf / p;
    let half = F::from_rat(Rat::new(1.into(), 2.into()));
    let d1 = F::from_rat(x1.recip()) + h2.clone();
    let d2 = F::from_rat(x2.recip()) + h2.clone();
    Ok([
        [half.clone() * d1, half.clone() * h2.clone()],
        [half.clone() * h2, half * d2],
    ])
}

/// trace((Hess u)⁻¹) = 4x₁x₂q/r³ + 2(r² − q)/r.
pub fn inverse_trace_formula<F: Field>(pr: &Profile<F>, x1: &Rat, x2: &Rat) -> F {
    let r = x1 + x2;
    let q = pr.q_poly().eval_rat(&r);
    let rf = F::from_rat(r.clone());
    F::from_rat(int(4) * x1 * x2 / (&r * &r * &r)) * q.clone() + F::from_int(2) * (rf.clone() * rf.clone() - q) / rf
}

/// det(Hess u) = r² / (4x₁x₂(r² − q)).
pub fn det_formula<F: Field>(pr: &Profile<F>, x1: &Rat, x2: &Rat) -> F {
    let r = x1 + x2;
    let q = pr.q_poly().eval_rat(&r);
    let rf = F::from_rat(r.clone());
    F::from_rat(&r * &r / (int(4) * x1 * x2)) / (rf.clone() * rf - q)
}

// ---------------------------------------------------------------------------
// The α/β case analysis.

fn px(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

/// 𝒜, 𝓑, 𝒞 as polynomials in x.
pub fn script_abc(m: u32) -> (Poly, Poly, Poly) {
    let m = m as i64;
    let a = px(&[-1, 3 * (m + 1), 3 * (m - 1), 1]).pow(2);
    let b = &(&px(&[1, 1]) * &px(&[-1, 1]).pow(3)).scale(&int(3)) - &px(&[2, 7, 18, 7, 2]).scale(&int(m));
    let c = px(&[1, 2, 1]).scale(&int(9));
    (a, b, c)
}

/// Coefficient of p in N₁, N₂, 𝒟 and their p-free parts: (constant, −slope) in x.
fn n_parts(m: u32) -> [(Poly, Poly); 3] {
    let m = m as i64;
    [
        (px(&[0, -3, -3]).scale(&int(m)), px(&[-(2 * m + 1), -(5 * m - 3), m - 3, 1])),
        (px(&[0, -1, 5, 2]).scale(&int(m)), px(&[-1, 3 * (m + 1), 3 * (m - 1), 1])),
        (px(&[0, 2, 1]).scale(&int(m)), px(&[m + 1, 2 * (m - 1), 1])),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixA<F: Field = Rat> {
    pub m: u32,
    pub a: Rat,
    pub x: Rat,
    pub weight: F,
    pub alpha: F,
    /// β from the smooth-closing system.
    pub beta: F,
    /// β with the printed (2m+1)x coefficient.
    pub beta_printed: F,
    pub script_a: Rat,
    pub script_b: Rat,
    pub script_c: Rat,
    /// Real roots ρ₁ ≤ ρ₂ of α² − 4β in the weight, when 𝓑² − 𝒜𝒞 ≥ 0.
    pub rho: Option<(Surd, Surd)>,
    pub n1: F,
    pub n2: F,
    pub script_d: F,
    /// Zeros of N₁, N₂, 𝒟 in the weight (r₁ undefined where its denominator vanishes).
    pub r1: Option<Rat>,
    pub r2: Rat,
    pub d: Rat,
    /// α² − 4β from α and β directly.
    pub disc: F,
    /// (𝒜p² + 2mx𝓑p + m²x²𝒞)/𝒟².
    pub disc_formula: F,
}

pub fn appendix_a<F: Field>(m: u32, a: &Rat, x: &Rat, weight: &F) -> Result<AppendixA<F>> {
    if x <= &int(1) {
        return Err(Error::DegeneratePolytope);
    }
    if weight.sign() <= 0 {
        return Err(Error::Parameter(format!("weight must be positive, got {weight}")));
    }
    let mi = m as i64;
    let mm = int(mi);
    let p = weight.clone();
    let fr = |r: Rat| F::from_rat(r);
    let [(c1, s1), (c2, s2), (cd, sd)] = n_parts(m);
    let lin = |c: &Poly, s: &Poly| fr(c.eval(x)) - p.clone() * fr(s.eval(x));
    let (n1, n2, dd) = (lin(&c1, &s1), lin(&c2, &s2), lin(&cd, &sd));
    if dd.is_zero() {
        return Err(Error::Singular("q4 = 0: the quartic factorization degenerates".into()));
    }
    let x1 = x - int(1);
    let alpha = fr(a * &x1) * (fr(&mm * x) + p.clone() * fr(px(&[-1, mi, 1]).eval(x))) / dd.clone();
    let beta_num = |k: i64| fr(-(&mm * (int(2) * x + int(1)))) + p.clone() * fr(px(&[-1, k, mi - 1]).eval(x));
    let beta = fr(a * a * x) * beta_num(2 * mi + 2) / dd.clone();
    let beta_printed = fr(a * a * x) * beta_num(2 * mi + 1) / dd.clone();
    let (pa, pb, pc) = script_abc(m);
    let (sa, sb, sc) = (pa.eval(x), pb.eval(x), pc.eval(x));
    let mx = &mm * x;
    let disc = alpha.clone() * alpha.clone() - F::from_int(4) * beta.clone();
    let disc_formula = fr(a * a)
        * (fr(sa.clone()) * p.clone() * p.clone()
            + fr(int(2) * &mx * &sb) * p.clone()
            + fr(&mx * &mx * &sc))
        / (dd.clone() * dd.clone());
    let rho_disc = &sb * &sb - &sa * &sc;
    let rho = (rho_disc >= Rat::zero()).then(|| {
        let s = Surd::sqrt(&rho_disc).expect("non-negative");
        let k = Surd::from(mx.clone() / &sa);
        let mb = Surd::from(-sb.clone());
        (k.clone() * (mb.clone() - s.clone()), k * (mb + s))
    });
    let r1_den = s1.eval(x);
    let r1 = (!r1_den.is_zero()).then(|| c1.eval(x) / r1_den);
    Ok(AppendixA {
        m,
        a: a.clone(),
        x: x.clone(),
        weight: p,
        alpha,
        beta,
        beta_printed,
        script_a: sa,
        script_b: sb,
        script_c: sc,
        rho,
        n1,
        n2,
        script_d: dd,
        r1,
        r2: c2.eval(x) / s2.eval(x),
        d: cd.eval(x) / sd.eval(x),
        disc,
        disc_formula,
    })
}

/// α and β read off from p(r) = −(q₄/24)(r − a)(r − b)(r² + αr + β) by exact division.
pub fn alpha_beta_by_division<F: Field>(cp: &ConeProfile<F>) -> Result<(F, F)> {
    let p = cp.base.p_poly();
    let ends = &Poly::linear_root(F::from_rat(cp.base.a.clone())) * &Poly::linear_root(F::from_rat(cp.b.clone()));
    let (quo, rem) = p.div_rem(&ends);
    if !rem.is_zero() {
        return Err(Error::Defect("p does not vanish at both ends".into()));
    }
    if quo.degree() != Some(2) {
        return Err(Error::Singular("q4 = 0: the quartic factorization degenerates".into()));
    }
    let q = quo.monic();
    Ok((q.coeff(1), q.coeff(0)))
}

/// (x+2)²𝒜 + 2(x+2)(x²+2(m−1)x+m+1)𝓑 + (x²+2(m−1)x+m+1)²𝒞, which equals
/// (x³+3x²−3x−1)²(x+m−1)².
pub fn closing_combination(m: u32) -> Poly {
    let (a, b, c) = script_abc(m);
    let e = px(&[m as i64 + 1, 2 * (m as i64 - 1), 1]);
    let x2 = px(&[2, 1]);
    &(&(&x2.pow(2) * &a) + &(&(&x2 * &e) * &b).scale(&int(2))) + &(&e.pow(2) * &c)
}

/// (2x²+5x−1)S₁ + 3(x+1)S₂ where S₁, S₂ are the p-slopes of N₁, N₂. It equals
/// 2(x−1)²(x+m−1)(x²+4x+1) > 0, so r₁ > 0 forces r₂ < r₁.
pub fn r1_r2_combination(m: u32) -> Poly {
    let [(_, s1), (_, s2), _] = n_parts(m);
    &(&px(&[-1, 5, 2]) * &s1) + &(&px(&[3, 3]) * &s2)
}

// ---------------------------------------------------------------------------
// Sign tables.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableCase {
    R1Negative,
    R1BelowR2,
    R2BelowR1,
}

impl fmt::Display for TableCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableCase::R1Negative => "r1 < 0",
            TableCase::R1BelowR2 => "0 < r1 < r2",
            TableCase::R2BelowR1 => "0 < r2 < r1",
        })
    }
}

pub const ROWS: [&str; 7] = ["D", "N1", "N2", "alpha^2-4beta", "N1/D", "N2/D", "D(alpha^2-4beta)"];

/// One cell: a sign, or None where the entry is undefined (division by 𝒟 = 0).
pub type Cell = Option<i8>;

#[derive(Clone, Debug, PartialEq)]
pub struct SignTable {
    pub m: u32,
    pub x: Rat,
    pub case: TableCase,
    /// Breakpoint labels after p = 0, ascending.
    pub points: Vec<&'static str>,
    /// Per row, alternating interval and point columns: (0, pt₁), pt₁, (pt₁, pt₂), …, (ptₙ, ∞).
    pub rows: Vec<Vec<Cell>>,
}

impl SignTable {
    /// True when N₁/𝒟, N₂/𝒟 and 𝒟(α²−4β) are never all positive.
    pub fn never_all_positive(&self) -> bool {
        (0..self.rows[0].len()).all(|j| !(4..7).all(|i| self.rows[i][j] == Some(1)))
    }
}

fn row_signs(m: u32, x: &Rat, p: &Surd) -> [Cell; 7] {
    let [(c1, s1), (c2, s2), (cd, sd)] = n_parts(m);
    let lin = |c: &Poly, s: &Poly| Surd::from(c.eval(x)) - p.clone() * Surd::from(s.eval(x));
    let (n1, n2, dd) = (lin(&c1, &s1), lin(&c2, &s2), lin(&cd, &sd));
    let (pa, pb, pc) = script_abc(m);
    let mx = int(m as i64) * x;
    let quad = Surd::from(pa.eval(x)) * p.clone() * p.clone()
        + Surd::from(int(2) * &mx * pb.eval(x)) * p.clone()
        + Surd::from(&mx * &mx * pc.eval(x));
    let (sd_, s1_, s2_, sq) = (dd.sign(), n1.sign(), n2.sign(), quad.sign());
    // α² − 4β = quad/𝒟², undefined when 𝒟 = 0
    let disc = (sd_ != 0).then_some(sq);
    let div = |s: i8| (sd_ != 0).then_some(s * sd_);
    // 𝒟(α² − 4β) has the sign of 𝒟·quad wherever it is defined, and that product vanishes at p = d
    [Some(sd_), Some(s1_), Some(s2_), disc, div(s1_), div(s2_), Some(sq * sd_)]
}

/// Evaluate the seven rows exactly at every breakpoint and on a rational sample in each gap.
pub fn sign_table(m: u32, x: &Rat) -> Result<SignTable> {
    let aq = appendix_a(m, &int(1), x, &int(1)).or_else(|_| appendix_a(m, &int(1), x, &int(2)))?;
    let mut pts: Vec<(&'static str, Surd)> = Vec::new();
    if let Some((r1, r2)) = &aq.rho {
        if r1.sign() > 0 && r1 != r2 {
            pts.push(("rho1", r1.clone()));
            pts.push(("rho2", r2.clone()));
        }
    }
    pts.push(("d", Surd::from(aq.d.clone())));
    let case = match &aq.r1 {
        Some(r1) if r1 > &Rat::zero() => {
            pts.push(("r1", Surd::from(r1.clone())));
            if r1 < &aq.r2 {
                TableCase::R1BelowR2
            } else {
                TableCase::R2BelowR1
            }
        }
        _ => TableCase::R1Negative,
    };
    pts.push(("r2", Surd::from(aq.r2.clone())));
    pts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let tol = Rat::new(1.into(), crate::exact::pow10(30));
    let lo = |s: &Surd| s.enclose(&tol).0;
    let hi = |s: &Surd| s.enclose(&tol).1;
    let mut samples: Vec<Surd> = Vec::new();
    let mut prev = Rat::zero();
    for (_, v) in &pts {
        let l = lo(v);
        let q = (&l - &prev) / int(4);
        samples.push(Surd::from(simplest_between(&(&prev + &q), &(&l - &q))));
        samples.push(v.clone());
        prev = hi(v);
    }
    samples.push(Surd::from(&prev + int(1) + &prev));
    let cells: Vec<[Cell; 7]> = samples.iter().map(|p| row_signs(m, x, p)).collect();
    let rows = (0..7).map(|i| cells.iter().map(|c| c[i]).collect()).collect();
    Ok(SignTable { m, x: x.clone(), case, points: pts.iter().map(|p| p.0).collect(), rows })
}

/// The tabulated signs for each case, in the same column layout as [`SignTable`].
/// "+", "-", "0", "x" (undefined), "" (left blank in the table).
pub fn printed_table(case: TableCase) -> (Vec<&'static str>, [Vec<&'static str>; 7]) {
    let v = |s: &str| -> Vec<&'static str> {
        s.split(',').map(|c| match c.trim() {
            "+" => "+",
            "-" => "-",
            "0" => "0",
            "x" => "x",
            _ => "",
        })
        .collect()
    };
    match case {
        TableCase::R1Negative => (
            vec!["rho1", "rho2", "d", "r2"],
            [
                v("+, ,+, ,+,0,-, ,-"),
                v("-, ,-, ,-, ,-, ,-"),
                v("+, ,+, ,+, ,+,0,-"),
                v("+,0,-,0,+, ,+, ,+"),
                v("-, ,-, ,-,x,+, ,+"),
                v("+, ,+, ,+,x,-,0,+"),
                v("+,0,-,0,+,0,-, ,-"),
            ],
        ),
        TableCase::R1BelowR2 => (
            vec!["rho1", "rho2", "d", "r1", "r2"],
            [
                v("+, ,+, ,+,0,-, ,-, ,-"),
                v("-, ,-, ,-, ,-,0,+, ,+"),
                v("+, ,+, ,+, ,+, ,+,0,-"),
                v("+,0,-,0,+, ,+, ,+, ,+"),
                v("-, ,-, ,-,x,+,0,-, ,-"),
                v("+, ,+, ,+,x,-, ,-,0,+"),
                v("+,0,-,0,+,0,-, ,-, ,-"),
            ],
        ),
        TableCase::R2BelowR1 => (
            vec!["rho1", "rho2", "d", "r2", "r1"],
            [
                v("+, ,+, ,+,0,-, ,-, ,-"),
                v("-, ,-, ,-, ,-, ,-,0,+"),
                v("+, ,+, ,+, ,+,0,-, ,-"),
                v("+,0,-,0,+, ,+, ,+, ,+"),
                v("-, ,-, ,-,x,+, ,+,0,-"),
                v("+, ,+, ,+,x,-,0,+, ,+"),
                v("+,0,-,0,+,0,-, ,-, ,-"),
            ],
        ),
    }
}

/// Cells where the computed table contradicts the printed one: (row, column, printed, computed).
/// Columns left of ρ₂ are dropped from the printed table when ρ is not real and positive.
pub fn table_mismatches(t: &SignTable) -> Vec<(&'static str, usize, &'static str, Cell)> {
    let (labels, printed) = printed_table(t.case);
    let skip = if t.points.first() == Some(&"rho1") { 0 } else { 4 };
    let mut out = Vec::new();
    if labels[skip / 2..] != t.points[..] {
        out.push(("breakpoint order", 0, "", None));
        return out;
    }
    for (i, row) in printed.iter().enumerate() {
        for (j, want) in row.iter().enumerate().skip(skip) {
            let got = t.rows[i][j - skip];
            let ok = match *want {
                "+" => got == Some(1),
                "-" => got == Some(-1),
                "0" => got == Some(0),
                "x" => got.is_none(),
                _ => true,
            };
            if !ok {
                out.push((ROWS[i], j - skip, *want, got));
            }
        }
    }
    out
}

/// The Appendix A quantities for a cone profile with the given data, or None when q₄ = 0.
pub fn appendix_a_for_cone<F: Field>(m: u32, a: &Rat, x: &Rat, weight: &F) -> Result<Option<AppendixA<F>>> {
    profile_from_cone(m, a, x, weight.clone())?;
    match appendix_a(m, a, x, weight) {
        Ok(q) => Ok(Some(q)),
        Err(Error::Singular(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
