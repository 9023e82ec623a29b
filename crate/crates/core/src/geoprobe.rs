//! Quadrature probes of distances and volumes along the diagonal ray x₁ = x₂.
//!
//! Along the ray the line element is √(r/(2p(r))) dr, times 1/|scal| for the
//! conformal metric scal⁻²g. Volumes of {a ≤ r ≤ R} are 2π²(R² − a²), or
//! 2π²∫2r·scal⁻⁴ dr conformally. Endpoint behaviour is decided exactly from
//! root multiplicities; quadrature only ever sees bounded integrands.

use std::f64::consts::PI;

use num::{Signed, Zero};

use crate::ansatz::Profile;
use crate::error::{Error, Result};
use crate::exact::{int, rat, to_f64, Rat};
use crate::poly::Poly;
use crate::roots::{real_roots_between, refine_root, IsolatedRoot};

/// Relative quadrature target.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Samples used by growth fits.
pub const SAMPLES: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    Finite(Rat),
    /// An irrational root of p, isolated to well below f64 resolution.
    Root(IsolatedRoot),
    Infinity,
}

impl Endpoint {
    /// A rational location: exact, or inside the isolating interval.
    pub fn location(&self) -> Option<Rat> {
        match self {
            Endpoint::Finite(r) => Some(r.clone()),
            Endpoint::Root(r) => Some(r.mid()),
            Endpoint::Infinity => None,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Endpoint::Finite(r) => to_f64(r),
            Endpoint::Root(r) => r.to_f64(),
            Endpoint::Infinity => f64::INFINITY,
        }
    }

    fn root_multiplicity(&self) -> Option<i32> {
        match self {
            Endpoint::Root(r) => Some(r.multiplicity as i32),
            _ => None,
        }
    }
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Endpoint::Finite(r) => write!(f, "{r}"),
            Endpoint::Root(r) => write!(f, "{}", r.decimal()),
            Endpoint::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Integral {
    Finite { value: f64, error: f64 },
    /// The integrand behaves like |distance to endpoint|^(−exponent) (or ℓ^(−exponent) at ∞).
    Diverges { endpoint: Endpoint, exponent: Rat },
}

impl Integral {
    pub fn value(&self) -> Option<f64> {
        match self {
            Integral::Finite { value, .. } => Some(*value),
            Integral::Diverges { .. } => None,
        }
    }
}

fn scal_poly(pr: &Profile) -> Poly {
    pr.scalar_curvature().poly()
}

fn multiplicity_at(p: &Poly, c: &Rat) -> usize {
    if p.is_zero() {
        return 0;
    }
    let mut k = 0;
    let mut q = p.clone();
    while q.eval(c).is_zero() {
        q = q.derivative();
        k += 1;
    }
    k
}

/// Decay exponent of the length integrand at an endpoint.
pub fn length_exponent(pr: &Profile, end: &Endpoint, conformal: bool) -> Rat {
    let p = pr.p_poly();
    let s = scal_poly(pr);
    match end {
        Endpoint::Finite(c) => {
            let nu = if conformal { multiplicity_at(&s, c) } else { 0 };
            rat(multiplicity_at(&p, c) as i64, 2) + int(nu as i64)
        }
        Endpoint::Root(r) => rat(r.multiplicity as i64, 2),
        Endpoint::Infinity => {
            let d = p.degree().unwrap_or(0) as i64;
            let nu = if conformal { s.degree().unwrap_or(0) as i64 } else { 0 };
            rat(d - 1, 2) + int(nu)
        }
    }
}

/// Decay exponent of the conformal volume density 2r·scal⁻⁴ at an endpoint.
pub fn volume_exponent(pr: &Profile, end: &Endpoint) -> Rat {
    let s = scal_poly(pr);
    match end {
        Endpoint::Finite(c) => int(4 * multiplicity_at(&s, c) as i64),
        Endpoint::Root(_) => int(0),
        Endpoint::Infinity => int(4 * s.degree().unwrap_or(0) as i64 - 1),
    }
}

/// ∫ near `end` of |x|^(−e) converges.
pub fn converges(end: &Endpoint, e: &Rat) -> bool {
    match end {
        Endpoint::Finite(_) | Endpoint::Root(_) => *e < int(1),
        Endpoint::Infinity => *e > int(1),
    }
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let first = quadrature::integrate(&f, a, b, tol);
    let scale = first.integral.abs();
    if scale > 1.0 {
        let second = quadrature::integrate(&f, a, b, tol * scale);
        (second.integral, second.error_estimate)
    } else {
        (first.integral, first.error_estimate)
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, x| acc * t + x)
}

/// p and scal re-expanded about a finite endpoint c, in t with r = c + dir·t:
/// p = t^mu·prest(t), scal = t^nu·srest(t).
#[derive(Clone, Debug)]
struct Local {
    c: f64,
    dir: f64,
    mu: i32,
    prest: Vec<f64>,
    nu: i32,
    srest: Vec<f64>,
}

/// Strip the vanishing low-order coefficients of p(c + dir·t); `known` overrides the count
/// when c only approximates an irrational root.
fn split_zeros(p: &Poly, c: &Rat, dir: i64, known: Option<i32>) -> (i32, Vec<f64>) {
    let sh = p.shift(c).scale_arg(&int(dir));
    let cs = sh.coeffs();
    let k = known.map(|k| k as usize).unwrap_or_else(|| cs.iter().take_while(|x| x.is_zero()).count());
    (k as i32, cs[k..].iter().map(to_f64).collect())
}

impl Local {
    fn new(pr: &Profile, c: &Rat, dir: i64, known_mu: Option<i32>) -> Self {
        let (mu, prest) = split_zeros(&pr.p_poly(), c, dir, known_mu);
        let (nu, srest) = split_zeros(&scal_poly(pr), c, dir, None);
        Local { c: to_f64(c), dir: dir as f64, mu, prest, nu, srest }
    }

    fn length(&self, t: f64, conformal: bool) -> f64 {
        let r = self.c + self.dir * t;
        let f = (r / (2.0 * t.powi(self.mu) * horner(&self.prest, t))).sqrt();
        if conformal {
            f / (t.powi(self.nu) * horner(&self.srest, t)).abs()
        } else {
            f
        }
    }

    /// Length density after t = u², regular at u = 0 when mu ≤ 1 and nu = 0.
    fn length_u(&self, u: f64, conformal: bool) -> f64 {
        let t = u * u;
        let r = self.c + self.dir * t;
        let mut f = 2.0 * u.powi(1 - self.mu) * (r / (2.0 * horner(&self.prest, t))).sqrt();
        if conformal {
            f /= (t.powi(self.nu) * horner(&self.srest, t)).abs();
        }
        f
    }

    fn volume(&self, t: f64) -> f64 {
        let r = self.c + self.dir * t;
        4.0 * PI * PI * r / (t.powi(self.nu) * horner(&self.srest, t)).powi(4)
    }
}

/// Poly in ℓ evaluated as v^(2·deg)·p(ℓ0/v²), i.e. Σ c_k ℓ0^k v^(2(deg−k)).
fn reversed(p: &Poly, l0: f64) -> (i32, impl Fn(f64) -> f64) {
    let d = p.degree().unwrap_or(0);
    let cs: Vec<f64> = p.coeffs().iter().enumerate().map(|(k, c)| to_f64(c) * l0.powi(k as i32)).collect();
    (d as i32, move |v: f64| {
        let v2 = v * v;
        (0..=d).fold(0.0, |acc, k| acc + cs[k] * v2.powi((d - k) as i32))
    })
}

fn check_interval(pr: &Profile, lo: &Rat, hi: &Endpoint, conformal: bool) -> Result<()> {
    let p = pr.p_poly();
    let hi_r = match hi {
        Endpoint::Finite(h) => Some(h),
        Endpoint::Root(r) => Some(&r.lo),
        Endpoint::Infinity => None,
    };
    if let Some(h) = hi_r {
        if h <= lo {
            return Err(Error::Parameter(format!("empty interval ({lo}, {h})")));
        }
    }
    let tol = rat(1, 1 << 20);
    if !real_roots_between(&p, Some(lo), hi_r, &tol)?.is_empty() {
        return Err(Error::Singular(format!("p has a root inside ({lo}, {hi})")));
    }
    let probe = match hi_r {
        Some(h) => (lo + h) / int(2),
        None => lo + int(1),
    };
    if !p.eval(&probe).is_positive() {
        return Err(Error::Singular(format!("p is negative on ({lo}, {hi})")));
    }
    if conformal {
        let s = scal_poly(pr);
        if s.is_zero() {
            return Err(Error::Singular("scal vanishes identically".into()));
        }
        if !real_roots_between(&s, Some(lo), hi_r, &tol)?.is_empty() {
            return Err(Error::Singular(format!("scal vanishes inside ({lo}, {hi})")));
        }
    }
    Ok(())
}

fn inf_split(lo: &Rat) -> Rat {
    lo.abs() + int(1)
}

/// Length of the diagonal ray between r = lo and r = hi.
pub fn ray_length(pr: &Profile, lo: &Rat, hi: &Endpoint, conformal: bool) -> Result<Integral> {
    ray_length_tol(pr, lo, hi, conformal, DEFAULT_TOL)
}

pub fn ray_length_tol(pr: &Profile, lo: &Rat, hi: &Endpoint, conformal: bool, tol: f64) -> Result<Integral> {
    check_interval(pr, lo, hi, conformal)?;
    let lo_end = Endpoint::Finite(lo.clone());
    for end in [&lo_end, hi] {
        let e = length_exponent(pr, end, conformal);
        if !converges(end, &e) {
            return Ok(Integral::Diverges { endpoint: end.clone(), exponent: e });
        }
    }
    let (value, error) = match hi {
        Endpoint::Finite(_) | Endpoint::Root(_) => finite_length(pr, lo, hi, conformal, tol),
        Endpoint::Infinity => {
            let l0 = inf_split(lo);
            let (v1, e1) = finite_length(pr, lo, &Endpoint::Finite(l0.clone()), conformal, tol);
            let (v2, e2) = infinite_length(pr, &l0, conformal, tol);
            (v1 + v2, e1 + e2)
        }
    };
    Ok(Integral::Finite { value, error })
}

fn finite_length(pr: &Profile, lo: &Rat, hi: &Endpoint, conformal: bool, tol: f64) -> (f64, f64) {
    let h = hi.location().expect("finite endpoint");
    let mid = (lo + &h) / int(2);
    let half = to_f64(&(&mid - lo)).sqrt();
    let lower = Local::new(pr, lo, 1, None);
    let upper = Local::new(pr, &h, -1, hi.root_multiplicity());
    let (a, ea) = integrate(|u| lower.length_u(u, conformal), 0.0, half, tol);
    let (b, eb) = integrate(|u| upper.length_u(u, conformal), 0.0, half, tol);
    (a + b, ea + eb)
}

/// ∫_{ℓ0}^∞ after ℓ = ℓ0/v².
fn infinite_length(pr: &Profile, l0: &Rat, conformal: bool, tol: f64) -> (f64, f64) {
    let l0f = to_f64(l0);
    let (d, phat) = reversed(&pr.p_poly(), l0f);
    let (nu, shat) = reversed(&scal_poly(pr), l0f);
    let nu = if conformal { nu } else { 0 };
    let f = |v: f64| {
        let mut g = 2.0 * l0f * v.powi(d - 4 + 2 * nu) * (l0f / (2.0 * phat(v))).sqrt();
        if conformal {
            g /= shat(v).abs();
        }
        g
    };
    integrate(f, 0.0, 1.0, tol)
}

/// Volume of {a ≤ r ≤ hi}.
pub fn volume(pr: &Profile, hi: &Endpoint, conformal: bool) -> Result<Integral> {
    volume_tol(pr, hi, conformal, DEFAULT_TOL)
}

pub fn volume_tol(pr: &Profile, hi: &Endpoint, conformal: bool, tol: f64) -> Result<Integral> {
    let a = &pr.a;
    if *hi == Endpoint::Finite(a.clone()) {
        return Ok(Integral::Finite { value: 0.0, error: 0.0 });
    }
    check_interval(pr, a, hi, conformal)?;
    if !conformal {
        return Ok(match hi {
            Endpoint::Finite(h) => {
                Integral::Finite { value: 2.0 * PI * PI * to_f64(&(h * h - a * a)), error: 0.0 }
            }
            Endpoint::Root(r) => {
                let (b, af) = (r.to_f64(), to_f64(a));
                Integral::Finite { value: 2.0 * PI * PI * (b * b - af * af), error: 0.0 }
            }
            Endpoint::Infinity => Integral::Diverges { endpoint: Endpoint::Infinity, exponent: int(-1) },
        });
    }
    let e = volume_exponent(pr, hi);
    if !converges(hi, &e) {
        return Ok(Integral::Diverges { endpoint: hi.clone(), exponent: e });
    }
    let (value, error) = match hi {
        Endpoint::Finite(_) | Endpoint::Root(_) => conformal_volume(pr, a, &hi.location().unwrap(), tol),
        Endpoint::Infinity => {
            let l0 = inf_split(a);
            let (v1, e1) = conformal_volume(pr, a, &l0, tol);
            let l0f = to_f64(&l0);
            let (_, shat) = reversed(&scal_poly(pr), l0f);
            // 2π²·2ℓ·s⁻⁴ dℓ with ℓ = ℓ0/v² and deg s = 1
            let f = |v: f64| 8.0 * PI * PI * l0f * l0f * v.powi(3) / shat(v).powi(4);
            let (v2, e2) = integrate(f, 0.0, 1.0, tol);
            (v1 + v2, e1 + e2)
        }
    };
    Ok(Integral::Finite { value, error })
}

fn conformal_volume(pr: &Profile, lo: &Rat, hi: &Rat, tol: f64) -> (f64, f64) {
    let s: Vec<f64> = scal_poly(pr).coeffs().iter().map(to_f64).collect();
    let f = |r: f64| 4.0 * PI * PI * r / horner(&s, r).powi(4);
    integrate(f, to_f64(lo), to_f64(hi), tol)
}

/// Closed-form conformal volume 2π²∫2r/(s0 + s1 r)⁴ dr, for cross-checks.
pub fn conformal_volume_exact(pr: &Profile, hi: &Rat) -> Result<f64> {
    let s = pr.scalar_curvature();
    let (s0, s1) = (to_f64(&s.a0), to_f64(&s.a1));
    let (a, h) = (to_f64(&pr.a), to_f64(hi));
    let anti = |r: f64| -> f64 {
        if s1 == 0.0 {
            r * r / s0.powi(4)
        } else {
            // ∫ 2r (s0+s1 r)⁻⁴ dr
            let w = s0 + s1 * r;
            2.0 / (s1 * s1) * (-1.0 / (2.0 * w * w) + s0 / (3.0 * w.powi(3)))
        }
    };
    check_interval(pr, &pr.a, &Endpoint::Finite(hi.clone()), true)?;
    Ok(2.0 * PI * PI * (anti(h) - anti(a)))
}

/// Non-conformal volume by integrating √det g over the region in (r, x₁), as an oracle for 2π²(R² − a²).
pub fn volume_by_density(pr: &Profile, hi: &Rat) -> Result<f64> {
    check_interval(pr, &pr.a, &Endpoint::Finite(hi.clone()), false)?;
    let p: Vec<f64> = pr.p_poly().coeffs().iter().map(to_f64).collect();
    let density = |x1: f64, x2: f64| {
        let r = x1 + x2;
        let h2 = r / horner(&p, r) - 1.0 / r;
        let (a, b, d) = (0.5 * (1.0 / x1 + h2), 0.5 * h2, 0.5 * (1.0 / x2 + h2));
        let det = a * d - b * b;
        // det g = det H · det H⁻¹
        (det * (1.0 / det)).sqrt()
    };
    let inner = |r: f64| integrate(|x1| density(x1, r - x1), 0.0, r, 1e-12).0;
    let (v, _) = integrate(inner, to_f64(&pr.a), to_f64(hi), 1e-10);
    Ok(4.0 * PI * PI * v)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Polynomial { exponent: f64 },
    Exponential { rate: f64 },
    Finite { total_volume: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSample {
    pub r: f64,
    /// End − r for a finite end, else r.
    pub gap: f64,
    pub distance: f64,
    pub volume: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub model: Model,
    /// RMS residual of the least-squares fit (0 for a finite volume).
    pub residual: f64,
    pub end: Endpoint,
    pub samples: Vec<GrowthSample>,
}

/// Where the ray from a ends: the first root of p above a, else the first root of scal (conformal), else ∞.
pub fn natural_end(pr: &Profile, conformal: bool) -> Result<Endpoint> {
    let tol = rat(1, 1 << 20);
    let mut polys = vec![pr.p_poly()];
    if conformal {
        let s = scal_poly(pr);
        if s.is_zero() {
            return Err(Error::Singular("scal vanishes identically".into()));
        }
        if s.eval(&pr.a).is_zero() {
            return Err(Error::Singular("scal vanishes on the zero section".into()));
        }
        polys.push(s);
    }
    let fine = rat(1, 1) / Rat::from_integer(crate::exact::pow10(40));
    let mut ends: Vec<Endpoint> = Vec::new();
    for p in &polys {
        if let Some(r) = real_roots_between(p, Some(&pr.a), None, &tol)?.into_iter().next() {
            ends.push(match r.exact() {
                Some(x) => Endpoint::Finite(x.clone()),
                None => {
                    let r = refine_root(p, &r, &fine);
                    if r.lo <= pr.a {
                        return Err(Error::Defect("root isolation reached the zero section".into()));
                    }
                    Endpoint::Root(r)
                }
            });
        }
    }
    ends.sort_by(|x, y| x.approx().total_cmp(&y.approx()));
    Ok(ends.into_iter().next().unwrap_or(Endpoint::Infinity))
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    (slope, icpt, rms)
}

pub fn growth_exponent(pr: &Profile, conformal: bool) -> Result<GrowthEstimate> {
    let end = natural_end(pr, conformal)?;
    let e = length_exponent(pr, &end, conformal);
    let vol_total = volume(pr, &end, conformal)?;
    if converges(&end, &e) {
        // finite distance: fine only when the end closes up smoothly or with a cone angle
        let closes = match &end {
            Endpoint::Finite(c) => pr.p_poly().eval(c).is_zero(),
            Endpoint::Root(_) => true,
            Endpoint::Infinity => false,
        };
        return match (closes, vol_total) {
            (true, Integral::Finite { value, .. }) => Ok(GrowthEstimate {
                model: Model::Finite { total_volume: value },
                residual: 0.0,
                end,
                samples: Vec::new(),
            }),
            _ => Err(Error::Singular(format!("incomplete end at r = {end}; no growth to measure"))),
        };
    }
    if let Integral::Finite { value, .. } = vol_total {
        // infinitely far but of finite volume; the samples still show the approach
        let samples = growth_samples(pr, &end, conformal)?;
        return Ok(GrowthEstimate { model: Model::Finite { total_volume: value }, residual: 0.0, end, samples });
    }
    let samples = growth_samples(pr, &end, conformal)?;
    let ly: Vec<f64> = samples.iter().map(|s| s.volume.ln()).collect();
    let (model, residual) = if e == int(1) {
        let xs: Vec<f64> = samples.iter().map(|s| s.distance).collect();
        let (rate, _, res) = least_squares(&xs, &ly);
        (Model::Exponential { rate }, res)
    } else {
        let xs: Vec<f64> = samples.iter().map(|s| s.distance.ln()).collect();
        let (exponent, _, res) = least_squares(&xs, &ly);
        (Model::Polynomial { exponent }, res)
    };
    Ok(GrowthEstimate { model, residual, end, samples })
}

/// Cumulative (distance, volume) pairs approaching the end.
pub fn growth_samples(pr: &Profile, end: &Endpoint, conformal: bool) -> Result<Vec<GrowthSample>> {
    let a = &pr.a;
    let af = to_f64(a);
    let tol = DEFAULT_TOL;
    let n = SAMPLES;
    let mut out = Vec::with_capacity(n);
    match end {
        Endpoint::Infinity => {
            let start = a * int(10_000);
            let mut dist = ray_length(pr, a, &Endpoint::Finite(start.clone()), conformal)?
                .value()
                .ok_or_else(|| Error::Defect("distance to the first sample diverged".into()))?;
            let mut vol = volume(pr, &Endpoint::Finite(start.clone()), conformal)?.value().unwrap_or(0.0);
            let p: Vec<f64> = pr.p_poly().coeffs().iter().map(to_f64).collect();
            let s: Vec<f64> = scal_poly(pr).coeffs().iter().map(to_f64).collect();
            let len = |r: f64| {
                let f = (r / (2.0 * horner(&p, r))).sqrt();
                if conformal {
                    f / horner(&s, r).abs()
                } else {
                    f
                }
            };
            let vden = |r: f64| 4.0 * PI * PI * r / horner(&s, r).powi(4);
            let mut prev = to_f64(&start);
            for i in 0..n {
                let r = af * 10f64.powf(4.0 + 8.0 * i as f64 / (n - 1) as f64);
                if i > 0 {
                    dist += integrate(len, prev, r, tol).0;
                    vol = if conformal { vol + integrate(vden, prev, r, tol).0 } else { 2.0 * PI * PI * (r * r - af * af) };
                }
                out.push(GrowthSample { r, gap: r, distance: dist, volume: vol });
                prev = r;
            }
        }
        Endpoint::Finite(_) | Endpoint::Root(_) => {
            let c = &end.location().unwrap();
            let cf = to_f64(c);
            let width = c - a;
            let start = c - &width / int(1000);
            let mut dist = ray_length(pr, a, &Endpoint::Finite(start.clone()), conformal)?
                .value()
                .ok_or_else(|| Error::Defect("distance to the first sample diverged".into()))?;
            let mut vol = volume(pr, &Endpoint::Finite(start), conformal)?.value().unwrap_or(0.0);
            let loc = Local::new(pr, c, -1, end.root_multiplicity());
            let wf = to_f64(&width);
            let mut prev = wf / 1000.0;
            for i in 0..n {
                let t = wf * 10f64.powf(-3.0 - 6.0 * i as f64 / (n - 1) as f64);
                if i > 0 {
                    dist += integrate(|u| loc.length(u, conformal), t, prev, tol).0;
                    vol = if conformal {
                        vol + integrate(|u| loc.volume(u), t, prev, tol).0
                    } else {
                        2.0 * PI * PI * ((cf - t) * (cf - t) - af * af)
                    };
                }
                out.push(GrowthSample { r: cf - t, gap: t, distance: dist, volume: vol });
                prev = t;
            }
        }
    }
    Ok(out)
}

/// log Vol against distance for a cubic p: 2√(2c₃), with c₃ the leading coefficient of p.
pub fn exponential_rate_oracle(pr: &Profile) -> Option<f64> {
    let p = pr.p_poly();
    (p.degree() == Some(3)).then(|| 2.0 * (2.0 * to_f64(&p.leading())).sqrt())
}
