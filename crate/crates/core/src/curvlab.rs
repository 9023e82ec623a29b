//! Exact curvature of toric Kähler metrics at rational interior points.
//!
//! Coordinates are ordered (x₁, x₂, θ₁, θ₂). Everything is torus invariant, so
//! a metric is a 4×4 matrix of jets in (x₁, x₂) and θ-derivatives vanish.

use num::{Signed, Zero};

use crate::ansatz::{einstein_constant, profile_from_local, Profile};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rat};
use crate::jet::Jet;
use crate::linalg::{charpoly, independent_subset, solve};
use crate::poly::Poly;

pub type Mat = Vec<Vec<Rat>>;
type JMat = Vec<Vec<Jet>>;

/// Jet order used throughout: Riemann needs 2, one spare for self-tests.
pub const ORDER: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x1: Rat,
    pub x2: Rat,
}

impl Point {
    pub fn new(x1: Rat, x2: Rat) -> Self {
        Point { x1, x2 }
    }

    pub fn r(&self) -> Rat {
        &self.x1 + &self.x2
    }

    fn r_jet(&self, order: usize) -> Jet {
        &Jet::var(order, 0, self.x1.clone()) + &Jet::var(order, 1, self.x2.clone())
    }
}

fn zeros(n: usize) -> Mat {
    vec![vec![Rat::zero(); n]; n]
}

fn check_point(pr: &Profile, pt: &Point) -> Result<()> {
    if !pt.x1.is_positive() || !pt.x2.is_positive() {
        return Err(Error::Parameter(format!("({}, {}) is not interior", pt.x1, pt.x2)));
    }
    if pr.p_poly().eval(&pt.r()).is_zero() {
        return Err(Error::Singular(format!("p vanishes at r = {}", pt.r())));
    }
    Ok(())
}

/// Hess(u) and its inverse as jets.
pub fn hessian_jets(pr: &Profile, pt: &Point, order: usize) -> Result<(JMat, JMat)> {
    check_point(pr, pt)?;
    let r = pt.r_jet(order);
    let p = Jet::eval_poly(&pr.p_poly(), &r);
    let h2 = &r.div(&p)? - &r.recip()?;
    let half = rat(1, 2);
    let x1 = Jet::var(order, 0, pt.x1.clone());
    let x2 = Jet::var(order, 1, pt.x2.clone());
    let a = (&x1.recip()? + &h2).scale(&half);
    let b = h2.scale(&half);
    let d = (&x2.recip()? + &h2).scale(&half);
    let det = &(&a * &d) - &(&b * &b);
    let inv = det.recip()?;
    let h = vec![vec![a.clone(), b.clone()], vec![b.clone(), d.clone()]];
    let hi = vec![vec![&d * &inv, &(-&b) * &inv], vec![&(-&b) * &inv, &a * &inv]];
    Ok((h, hi))
}

/// Closed-form inverse 2[[x₁ − x₁²f, −x₁x₂f], [−x₁x₂f, x₂ − x₂²f]] with f = q/r³.
pub fn closed_form_inverse(pr: &Profile, pt: &Point) -> Mat {
    let r = pt.r();
    let f = pr.q_poly().eval(&r) / (&r * &r * &r);
    let (x1, x2) = (&pt.x1, &pt.x2);
    let two = int(2);
    vec![
        vec![&two * (x1 - x1 * x1 * &f), -(&two * x1 * x2 * &f)],
        vec![-(&two * x1 * x2 * &f), &two * (x2 - x2 * x2 * &f)],
    ]
}

/// A torus-invariant metric as jets, with its inverse.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: JMat,
    pub ginv: JMat,
}

impl MetricJet {
    pub fn order(&self) -> usize {
        self.g[0][0].order()
    }

    /// f·g for a positive conformal factor f.
    pub fn conformal(&self, f: &Jet) -> Result<MetricJet> {
        let fi = f.recip()?;
        let g = self.g.iter().map(|row| row.iter().map(|x| x * f).collect()).collect();
        let ginv = self.ginv.iter().map(|row| row.iter().map(|x| x * &fi).collect()).collect();
        Ok(MetricJet { g, ginv })
    }

    pub fn values(&self) -> (Mat, Mat) {
        let v = |m: &JMat| m.iter().map(|row| row.iter().map(|x| x.value().clone()).collect()).collect();
        (v(&self.g), v(&self.ginv))
    }
}

/// g = Hess(u) ⊕ Hess(u)⁻¹.
pub fn metric_at(pr: &Profile, pt: &Point, order: usize) -> Result<MetricJet> {
    let (h, hi) = hessian_jets(pr, pt, order)?;
    let z = Jet::zero(order);
    let mut g = vec![vec![z.clone(); 4]; 4];
    let mut ginv = vec![vec![z; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = h[i][j].clone();
            g[i + 2][j + 2] = hi[i][j].clone();
            ginv[i][j] = hi[i][j].clone();
            ginv[i + 2][j + 2] = h[i][j].clone();
        }
    }
    Ok(MetricJet { g, ginv })
}

fn d(j: &Jet, k: usize) -> Option<Jet> {
    (k < 2).then(|| j.partial(k))
}

/// Levi-Civita connection, curvature and their first consequences at the base point.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub g: Mat,
    pub ginv: Mat,
    /// Γ^a_bc
    pub gamma: Vec<Vec<Vec<Rat>>>,
    /// R^a_bcd, with R(∂c, ∂d)∂b = R^a_bcd ∂a
    pub riemann: Vec<Vec<Vec<Vec<Rat>>>>,
    pub ricci: Mat,
    pub scal: Rat,
}

impl Geometry {
    /// R_abcd = g_ae R^e_bcd.
    pub fn riemann_lowered(&self) -> Vec<Vec<Vec<Vec<Rat>>>> {
        let mut out = vec![vec![vec![vec![Rat::zero(); 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for dd in 0..4 {
                        let mut s = Rat::zero();
                        for e in 0..4 {
                            if !self.g[a][e].is_zero() {
                                s += &self.g[a][e] * &self.riemann[e][b][c][dd];
                            }
                        }
                        out[a][b][c][dd] = s;
                    }
                }
            }
        }
        out
    }

    /// Hess f = ∂∂f − Γ ∂f for a jet f.
    pub fn hessian(&self, f: &Jet) -> Mat {
        let mut h = zeros(4);
        let df = [f.deriv(1, 0), f.deriv(0, 1)];
        for a in 0..4 {
            for b in 0..4 {
                let mut v = match (a, b) {
                    (0, 0) => f.deriv(2, 0),
                    (1, 1) => f.deriv(0, 2),
                    (0, 1) | (1, 0) => f.deriv(1, 1),
                    _ => Rat::zero(),
                };
                for (c, dfc) in df.iter().enumerate() {
                    v -= &self.gamma[c][a][b] * dfc;
                }
                h[a][b] = v;
            }
        }
        h
    }

    pub fn trace(&self, t: &Mat) -> Rat {
        let mut s = Rat::zero();
        for a in 0..4 {
            for b in 0..4 {
                s += &self.ginv[a][b] * &t[a][b];
            }
        }
        s
    }

    /// T − (tr T / 4) g.
    pub fn traceless(&self, t: &Mat) -> Mat {
        let tr = self.trace(t) / int(4);
        (0..4).map(|a| (0..4).map(|b| &t[a][b] - &tr * &self.g[a][b]).collect()).collect()
    }

    /// Positive Laplacian Δf = −g^{ab}(Hess f)_ab.
    pub fn laplacian(&self, f: &Jet) -> Rat {
        -self.trace(&self.hessian(f))
    }

    /// |df|².
    pub fn grad_norm2(&self, f: &Jet) -> Rat {
        let df = [f.deriv(1, 0), f.deriv(0, 1)];
        let mut s = Rat::zero();
        for a in 0..2 {
            for b in 0..2 {
                s += &self.ginv[a][b] * &df[a] * &df[b];
            }
        }
        s
    }
}

pub fn geometry(mj: &MetricJet) -> Result<Geometry> {
    if mj.order() < 2 {
        return Err(Error::Parameter("curvature needs jets of order 2".into()));
    }
    let order = mj.order() - 1;
    let zero = Jet::zero(order);
    // Γ^a_bc as jets of order k−1
    let mut dg: Vec<Vec<Vec<Option<Jet>>>> = vec![vec![vec![None; 4]; 4]; 4];
    for k in 0..2 {
        for a in 0..4 {
            for b in 0..4 {
                dg[k][a][b] = d(&mj.g[a][b], k);
            }
        }
    }
    let dgv = |k: usize, a: usize, b: usize| -> Jet {
        if k < 2 {
            dg[k][a][b].clone().unwrap()
        } else {
            zero.clone()
        }
    };
    let mut gam = vec![vec![vec![zero.clone(); 4]; 4]; 4];
    for b in 0..4 {
        for c in b..4 {
            let lower: Vec<Jet> = (0..4).map(|dd| &(&dgv(b, dd, c) + &dgv(c, dd, b)) - &dgv(dd, b, c)).collect();
            for a in 0..4 {
                let mut s = zero.clone();
                for (dd, l) in lower.iter().enumerate() {
                    if mj.ginv[a][dd].value().is_zero() && mj.ginv[a][dd] == Jet::zero(mj.order()) {
                        continue;
                    }
                    s = &s + &(&mj.ginv[a][dd].truncate(order) * l);
                }
                let s = s.scale(&rat(1, 2));
                gam[a][b][c] = s.clone();
                gam[a][c][b] = s;
            }
        }
    }
    let gv: Vec<Vec<Vec<Rat>>> =
        gam.iter().map(|m| m.iter().map(|r| r.iter().map(|j| j.value().clone()).collect()).collect()).collect();
    let dgam = |a: usize, b: usize, c: usize, k: usize| -> Rat {
        if k < 2 {
            gam[a][b][c].partial(k).value().clone()
        } else {
            Rat::zero()
        }
    };
    let mut riem = vec![vec![vec![vec![Rat::zero(); 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for dd in (c + 1)..4 {
                    let mut v = dgam(a, dd, b, c) - dgam(a, c, b, dd);
                    for e in 0..4 {
                        v += &gv[a][c][e] * &gv[e][dd][b] - &gv[a][dd][e] * &gv[e][c][b];
                    }
                    riem[a][b][dd][c] = -v.clone();
                    riem[a][b][c][dd] = v;
                }
            }
        }
    }
    let mut ric = zeros(4);
    for b in 0..4 {
        for dd in 0..4 {
            let mut s = Rat::zero();
            for a in 0..4 {
                s += &riem[a][b][a][dd];
            }
            ric[b][dd] = s;
        }
    }
    let (g, ginv) = mj.values();
    let mut scal = Rat::zero();
    for a in 0..4 {
        for b in 0..4 {
            scal += &ginv[a][b] * &ric[a][b];
        }
    }
    Ok(Geometry { g, ginv, gamma: gv, riemann: riem, ricci: ric, scal })
}

/// Largest |entry| of a matrix.
pub fn max_abs(m: &Mat) -> Rat {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

/// Scalar curvature of the profile as a jet: 2q₃ + q₄ r.
pub fn scal_jet(pr: &Profile, pt: &Point, order: usize) -> Jet {
    let s = pr.scalar_curvature();
    Jet::eval_poly(&s.poly(), &pt.r_jet(order))
}

// ---------------------------------------------------------------------------
// Weyl tensor and its self-dual part.

/// W_abcd from the lowered Riemann tensor.
pub fn weyl(geo: &Geometry) -> Vec<Vec<Vec<Vec<Rat>>>> {
    let r = geo.riemann_lowered();
    let (g, ric, s) = (&geo.g, &geo.ricci, &geo.scal);
    let s6 = s / int(6);
    let mut w = r.clone();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for dd in 0..4 {
                    let k = &ric[a][c] * &g[b][dd] - &ric[a][dd] * &g[b][c] + &ric[b][dd] * &g[a][c]
                        - &ric[b][c] * &g[a][dd];
                    let gg = &g[a][c] * &g[b][dd] - &g[a][dd] * &g[b][c];
                    w[a][b][c][dd] = &r[a][b][c][dd] - k / int(2) + &s6 * gg;
                }
            }
        }
    }
    w
}

fn perm_sign(p: [usize; 4]) -> i64 {
    let mut s = 1;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Kähler form ω = dx₁∧dθ₁ + dx₂∧dθ₂.
pub fn kahler_form() -> Mat {
    let mut w = zeros(4);
    w[0][2] = int(1);
    w[2][0] = int(-1);
    w[1][3] = int(1);
    w[3][1] = int(-1);
    w
}

fn raise2(geo: &Geometry, a: &Mat) -> Mat {
    let mut out = zeros(4);
    for c in 0..4 {
        for dd in 0..4 {
            let mut s = Rat::zero();
            for e in 0..4 {
                for f in 0..4 {
                    if !a[e][f].is_zero() {
                        s += &geo.ginv[c][e] * &geo.ginv[dd][f] * &a[e][f];
                    }
                }
            }
            out[c][dd] = s;
        }
    }
    out
}

/// Hodge star on 2-forms with orientation sign `orient` (det g = 1 for these metrics).
pub fn hodge(geo: &Geometry, a: &Mat, orient: i64) -> Mat {
    let up = raise2(geo, a);
    let mut out = zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Rat::zero();
            for c in 0..4 {
                for dd in 0..4 {
                    let e = perm_sign([i, j, c, dd]);
                    if e != 0 {
                        s += int(e) * &up[c][dd];
                    }
                }
            }
            out[i][j] = s * int(orient) / int(2);
        }
    }
    out
}

/// The orientation sign making the Kähler form self-dual.
pub fn kahler_orientation(geo: &Geometry) -> Result<i64> {
    let w = kahler_form();
    for o in [1, -1] {
        if hodge(geo, &w, o) == w {
            return Ok(o);
        }
    }
    Err(Error::Defect("Kähler form is not self-dual for either orientation".into()))
}

fn flat(a: &Mat) -> Vec<Rat> {
    let mut v = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            v.push(a[i][j].clone());
        }
    }
    v
}

/// W acting on 2-forms: (Wα)_ab = ½ W_ab^{cd} α_cd.
pub fn weyl_on_forms(geo: &Geometry, w: &[Vec<Vec<Vec<Rat>>>], a: &Mat) -> Mat {
    let up = raise2(geo, a);
    let mut out = zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Rat::zero();
            for c in 0..4 {
                for dd in 0..4 {
                    if !up[c][dd].is_zero() {
                        s += &w[i][j][c][dd] * &up[c][dd];
                    }
                }
            }
            out[i][j] = s / int(2);
        }
    }
    out
}

/// Characteristic polynomial (ascending) of W restricted to Λ⁺.
pub fn weyl_plus_charpoly(geo: &Geometry) -> Result<Poly> {
    let o = kahler_orientation(geo)?;
    let w = weyl(geo);
    let mut cands = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut e = zeros(4);
            e[i][j] = int(1);
            e[j][i] = int(-1);
            let s = hodge(geo, &e, o);
            let plus: Mat = (0..4).map(|a| (0..4).map(|b| (&e[a][b] + &s[a][b]) / int(2)).collect()).collect();
            cands.push(plus);
        }
    }
    let flats: Vec<Vec<Rat>> = cands.iter().map(flat).collect();
    let idx = independent_subset(&flats);
    if idx.len() != 3 {
        return Err(Error::Defect(format!("Λ⁺ has dimension {}", idx.len())));
    }
    let basis: Vec<Vec<Rat>> = idx.iter().map(|&i| flats[i].clone()).collect();
    let dot = |u: &[Rat], v: &[Rat]| u.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
    let gram: Mat = (0..3).map(|k| (0..3).map(|l| dot(&basis[k], &basis[l])).collect()).collect();
    let mut images = Vec::with_capacity(3);
    let mut cols = Vec::with_capacity(3);
    for &i in &idx {
        let img = flat(&weyl_on_forms(geo, &w, &cands[i]));
        cols.push(basis.iter().map(|b| dot(b, &img)).collect::<Vec<_>>());
        images.push(img);
    }
    let sol = solve(&gram, &cols).ok_or_else(|| Error::Defect("singular Λ⁺ Gram matrix".into()))?;
    for (img, c) in images.iter().zip(&sol) {
        // the image must lie in Λ⁺
        let back: Vec<Rat> = (0..6).map(|j| (0..3).fold(Rat::zero(), |acc, l| acc + &c[l] * &basis[l][j])).collect();
        if &back != img {
            return Err(Error::Defect("W does not preserve Λ⁺".into()));
        }
    }
    let coef: Mat = (0..3).map(|l| (0..3).map(|k| sol[k][l].clone()).collect()).collect();
    Ok(charpoly(&coef))
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub point: Point,
    pub metric: Mat,
    pub scal: Rat,
    pub ricci: Mat,
    pub weyl_plus_charpoly: Poly,
    /// Bach tensor by the extremal-Kähler formula (1/12)[s·Ric₀ + 2(Hess s)₀].
    pub bach: Mat,
    pub bach_max_entry: Rat,
    /// Max entry of Ric(g̃) − (S/4)g̃ for g̃ = scal⁻²g; None where scal = 0.
    pub einstein_residual: Option<Rat>,
    /// S/4 with S the scalar curvature of g̃.
    pub lambda: Option<Rat>,
}

pub fn curvature_at(pr: &Profile, pt: &Point) -> Result<CurvatureReport> {
    let mj = metric_at(pr, pt, ORDER)?;
    let geo = geometry(&mj)?;
    let s_jet = scal_jet(pr, pt, ORDER);
    if &geo.scal != s_jet.value() {
        return Err(Error::Defect(format!("scal {} differs from 2q3 + q4 r = {}", geo.scal, s_jet.value())));
    }
    let bach = bach_tensor(&geo, &s_jet);
    let bach_max_entry = max_abs(&bach);
    let (einstein_residual, lambda) = match conformal_einstein(pr, pt) {
        Ok((res, s)) => (Some(res), Some(s / int(4))),
        Err(Error::Singular(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(CurvatureReport {
        point: pt.clone(),
        metric: geo.g.clone(),
        scal: geo.scal.clone(),
        ricci: geo.ricci.clone(),
        weyl_plus_charpoly: weyl_plus_charpoly(&geo)?,
        bach,
        bach_max_entry,
        einstein_residual,
        lambda,
    })
}

pub fn bach_tensor(geo: &Geometry, s: &Jet) -> Mat {
    let ric0 = geo.traceless(&geo.ricci);
    let hs0 = geo.traceless(&geo.hessian(s));
    let sv = s.value();
    (0..4)
        .map(|a| (0..4).map(|b| (sv * &ric0[a][b] + int(2) * &hs0[a][b]) / int(12)).collect())
        .collect()
}

/// Ric(g̃) − (S/4)g̃ for g̃ = φ·g; returns (max |entry|, S).
pub fn einstein_residual_conformal(mj: &MetricJet, phi: &Jet) -> Result<(Rat, Rat)> {
    let gt = mj.conformal(phi)?;
    let geo = geometry(&gt)?;
    let s4 = &geo.scal / int(4);
    let res: Mat = (0..4).map(|a| (0..4).map(|b| &geo.ricci[a][b] - &s4 * &geo.g[a][b]).collect()).collect();
    Ok((max_abs(&res), geo.scal))
}

/// Residual and scalar curvature of scal⁻²·g at one point.
pub fn conformal_einstein(pr: &Profile, pt: &Point) -> Result<(Rat, Rat)> {
    let s = scal_jet(pr, pt, ORDER);
    if s.value().is_zero() {
        return Err(Error::Singular(format!("scal vanishes at r = {}", pt.r())));
    }
    let mj = metric_at(pr, pt, ORDER)?;
    einstein_residual_conformal(&mj, &s.powi(-2)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformalEinsteinReport {
    pub max_residual: Rat,
    /// Scalar curvature of g̃ at each point.
    pub scal_tilde: Vec<Rat>,
    pub lambda: Rat,
    /// Exact Einstein constant of the profile, for comparison.
    pub einstein_constant: Rat,
}

pub fn conformal_einstein_residual(pr: &Profile, pts: &[Point]) -> Result<ConformalEinsteinReport> {
    let mut max_residual = Rat::zero();
    let mut scal_tilde = Vec::new();
    for pt in pts {
        let (res, s) = conformal_einstein(pr, pt)?;
        max_residual = max_residual.max(res);
        scal_tilde.push(s);
    }
    let e = einstein_constant(pr)?;
    let lambda = scal_tilde.first().cloned().unwrap_or_else(Rat::zero) / int(4);
    Ok(ConformalEinsteinReport { max_residual, scal_tilde, lambda, einstein_constant: e.from_q })
}

/// −Σ ∂ᵢ∂ⱼ u^{ij} at the point.
pub fn abreu_scal(pr: &Profile, pt: &Point) -> Result<Rat> {
    let (_, hi) = hessian_jets(pr, pt, 2)?;
    Ok(-(hi[0][0].deriv(2, 0) + int(2) * hi[0][1].deriv(1, 1) + hi[1][1].deriv(0, 2)))
}

// ---------------------------------------------------------------------------

/// A function of r alone: a polynomial or the reciprocal of one.
#[derive(Clone, Debug, PartialEq)]
pub enum Radial {
    Poly(Poly),
    Recip(Poly),
}

impl Radial {
    pub fn jet(&self, pt: &Point, order: usize) -> Result<Jet> {
        let r = pt.r_jet(order);
        match self {
            Radial::Poly(p) => Ok(Jet::eval_poly(p, &r)),
            Radial::Recip(p) => Jet::eval_poly(p, &r).recip(),
        }
    }

    /// (γ′, γ″) at r.
    pub fn derivs(&self, r: &Rat) -> Result<(Rat, Rat)> {
        match self {
            Radial::Poly(p) => {
                let d1 = p.derivative();
                Ok((d1.eval(r), d1.derivative().eval(r)))
            }
            Radial::Recip(p) => {
                let (v, d1, d2) = (p.eval(r), p.derivative().eval(r), p.derivative().derivative().eval(r));
                if v.is_zero() {
                    return Err(Error::Singular(format!("1/P at a root r = {r}")));
                }
                Ok((-(&d1 / (&v * &v)), (int(2) * &d1 * &d1 - &v * &d2) / (&v * &v * &v)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianCheck {
    pub computed: Rat,
    pub formula: Rat,
}

impl LaplacianCheck {
    pub fn residual(&self) -> Rat {
        &self.computed - &self.formula
    }
}

/// Δγ from the metric against −2[(2 − q′/r)γ′ + (r − q/r)γ″].
pub fn laplacian_check(pr: &Profile, gamma: &Radial, pt: &Point) -> Result<LaplacianCheck> {
    let geo = geometry(&metric_at(pr, pt, ORDER)?)?;
    let computed = geo.laplacian(&gamma.jet(pt, ORDER)?);
    let r = pt.r();
    let q = pr.q_poly();
    let (g1, g2) = gamma.derivs(&r)?;
    let qv = q.eval(&r);
    let q1 = q.derivative().eval(&r);
    let formula = int(-2) * ((int(2) - &q1 / &r) * g1 + (&r - &qv / &r) * g2);
    Ok(LaplacianCheck { computed, formula })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerdzinskiReport {
    /// s³ − 6sΔs − 12|ds|² at each point.
    pub values: Vec<Rat>,
    pub constant: bool,
    pub einstein_constant: Rat,
}

pub fn derdzinski_scalar_identity(pr: &Profile, pts: &[Point]) -> Result<DerdzinskiReport> {
    let mut values = Vec::new();
    for pt in pts {
        let geo = geometry(&metric_at(pr, pt, ORDER)?)?;
        let s = scal_jet(pr, pt, ORDER);
        let sv = s.value().clone();
        values.push(&sv * &sv * &sv - int(6) * &sv * geo.laplacian(&s) - int(12) * geo.grad_norm2(&s));
    }
    let constant = values.windows(2).all(|w| w[0] == w[1]);
    Ok(DerdzinskiReport { values, constant, einstein_constant: einstein_constant(pr)?.from_q })
}

/// (Ric)₀ + 2s⁻¹(Hess s)₀, which vanishes for Bach-flat profiles with s ≠ 0.
pub fn derdzinski_forward_residual(pr: &Profile, pt: &Point) -> Result<Rat> {
    let geo = geometry(&metric_at(pr, pt, ORDER)?)?;
    let s = scal_jet(pr, pt, ORDER);
    if s.value().is_zero() {
        return Err(Error::Singular("scal = 0".into()));
    }
    let ric0 = geo.traceless(&geo.ricci);
    let hs0 = geo.traceless(&geo.hessian(&s));
    let k = int(2) / s.value();
    let res: Mat = (0..4).map(|a| (0..4).map(|b| &ric0[a][b] + &k * &hs0[a][b]).collect()).collect();
    Ok(max_abs(&res))
}

// ---------------------------------------------------------------------------

/// J = g⁻¹ω read as an endomorphism: J^a_b = g^{ac} ω_cb.
pub fn complex_structure(geo: &Geometry) -> Mat {
    let w = kahler_form();
    (0..4)
        .map(|a| (0..4).map(|b| (0..4).fold(Rat::zero(), |acc, c| acc + &geo.ginv[a][c] * &w[c][b])).collect())
        .collect()
}

/// Riemann symmetries and first Bianchi identity: number of violated components.
pub fn riemann_defects(geo: &Geometry) -> usize {
    let r = geo.riemann_lowered();
    let mut bad = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for dd in 0..4 {
                    let v = &r[a][b][c][dd];
                    if *v != -r[b][a][c][dd].clone() || *v != -r[a][b][dd][c].clone() || *v != r[c][dd][a][b] {
                        bad += 1;
                    }
                    if !(v + &r[a][c][dd][b] + &r[a][dd][b][c]).is_zero() {
                        bad += 1;
                    }
                }
            }
        }
    }
    bad
}

// ---------------------------------------------------------------------------

/// Coframe dr, κ, η, χ and the metric's coefficients on it.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameCheck {
    /// Off-diagonal inner products ⟨dr,κ⟩, ⟨dr,η⟩, ⟨dr,χ⟩, ⟨κ,η⟩, ⟨κ,χ⟩, ⟨η,χ⟩.
    pub cross: Vec<Rat>,
    /// g = Σ cᵢ ωᵢ², with cᵢ = 1/|ωᵢ|², in the order dr, η, κ, χ.
    pub coefficients: [Rat; 4],
    /// The coefficients the frame lemma predicts: r/(2p), 2p/r, 1/(2r x₁x₂), 2r x₁x₂.
    pub predicted: [Rat; 4],
    /// Which printed radial coefficient matches: "2r/p", "2/(rp)", or "neither".
    pub printed_radial_match: &'static str,
    /// The metric rebuilt from the coframe equals g.
    pub reconstructs: bool,
}

pub fn diagonal_frame_check(pr: &Profile, pt: &Point) -> Result<FrameCheck> {
    let mj = metric_at(pr, pt, 1)?;
    let (g, ginv) = mj.values();
    let r = pt.r();
    let (x1, x2) = (&pt.x1, &pt.x2);
    let z = Rat::zero();
    let forms: [Vec<Rat>; 4] = [
        vec![int(1), int(1), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), x1 / &r, x2 / &r],
        vec![-x2.clone(), x1.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), r.recip(), -r.recip()],
    ];
    let ip = |u: &[Rat], v: &[Rat]| {
        let mut s = Rat::zero();
        for a in 0..4 {
            for b in 0..4 {
                s += &ginv[a][b] * &u[a] * &v[b];
            }
        }
        s
    };
    let mut cross = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            cross.push(ip(&forms[i], &forms[j]));
        }
    }
    let coefficients: [Rat; 4] = std::array::from_fn(|i| ip(&forms[i], &forms[i]).recip());
    let p = pr.p_poly().eval(&r);
    let x12 = x1 * x2;
    let predicted = [
        &r / (int(2) * &p),
        int(2) * &p / &r,
        (int(2) * &r * &x12).recip(),
        int(2) * &r * &x12,
    ];
    let printed_radial_match = if coefficients[0] == int(2) * &r / &p {
        "2r/p"
    } else if coefficients[0] == int(2) / (&r * &p) {
        "2/(rp)"
    } else {
        "neither"
    };
    let mut rebuilt = zeros(4);
    for (f, c) in forms.iter().zip(&coefficients) {
        for a in 0..4 {
            for b in 0..4 {
                rebuilt[a][b] += c * &f[a] * &f[b];
            }
        }
    }
    Ok(FrameCheck { cross, coefficients, predicted, printed_radial_match, reconstructs: rebuilt == g })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct BeyondLimit {
    pub m: u32,
    pub a: Rat,
    /// Max Einstein residual over the points.
    pub max_residual: Rat,
    /// Scalar curvature of g^E at each point.
    pub scal: Vec<Rat>,
    /// r/a where the conformal factor blows up, if any.
    pub pole_ratio: Option<Rat>,
    /// m = 2: the factor is constant and no rescaling happens.
    pub rescaled: bool,
}

/// φ⁻¹ = (1/4m)(8(m−1) − 4(m−2)r/a) as a polynomial in r.
pub fn beyond_factor_inverse(m: u32, a: &Rat) -> Poly {
    let mi = m as i64;
    let k = rat(1, 4 * mi);
    Poly::new(vec![&k * int(8 * (mi - 1)), -(&k * int(4 * (mi - 2)) / a)])
}

/// g^E = φ²·g for the scalar-flat profile at (m, a).
pub fn beyond_limit(m: u32, a: &Rat, pts: &[Point]) -> Result<BeyondLimit> {
    let pr = profile_from_local(m, a, &int(0))?;
    let finv = beyond_factor_inverse(m, a);
    let pole_ratio = (m > 2).then(|| rat(2 * (m as i64 - 1), m as i64 - 2));
    let mut max_residual = Rat::zero();
    let mut scal = Vec::new();
    for pt in pts {
        let fi = Jet::eval_poly(&finv, &pt.r_jet(ORDER));
        let phi2 = fi.powi(-2)?;
        let mj = metric_at(&pr, pt, ORDER)?;
        let (res, s) = einstein_residual_conformal(&mj, &phi2)?;
        max_residual = max_residual.max(res);
        scal.push(s);
    }
    Ok(BeyondLimit { m, a: a.clone(), max_residual, scal, pole_ratio, rescaled: m != 2 })
}

/// The closed-form S of the rescaled metric: 12/a for m = 1 and −12(m−2)/a otherwise.
pub fn beyond_limit_scal(m: u32, a: &Rat) -> Rat {
    if m == 1 {
        int(12) / a
    } else {
        -(int(12) * int(m as i64 - 2)) / a
    }
}

