//! The exact curvature checks run by `calabi verify`, bundled per profile.

use num::{Signed, Zero};

use crate::ansatz::{einstein_constant, Profile};
use crate::curvlab::{
    abreu_scal, curvature_at, derdzinski_scalar_identity, diagonal_frame_check, laplacian_check, CurvatureReport,
    Point, Radial,
};
use crate::error::{Error, Result};
use crate::exact::{int, rat, Rat};
use crate::poly::Poly;
use crate::report::{rs, Check};
use crate::roots::real_roots_above;

/// Radii (a, hi) on which the metric is defined: p > 0 there. Unbounded ends are
/// cut at a + 10.
pub fn interior_window(pr: &Profile) -> Result<(Rat, Rat)> {
    let cap = &pr.a + int(10);
    let hi = match real_roots_above(&pr.p_poly(), &pr.a)?.first() {
        Some(root) if root.lo < cap => root.lo.clone(),
        _ => cap,
    };
    if hi <= pr.a {
        return Err(Error::Singular("no interior: p has a root at a".into()));
    }
    Ok((pr.a.clone(), hi))
}

/// Map u, t ∈ (0, 1) to the point with r = lo + u(hi − lo), x₁ = t r.
pub fn point_in(window: &(Rat, Rat), u: &Rat, t: &Rat) -> Point {
    let r = &window.0 + u * (&window.1 - &window.0);
    let x1 = t * &r;
    let x2 = &r - &x1;
    Point::new(x1, x2)
}

/// (λ − s/6)(λ + s/12)².
pub fn weyl_plus_expected(s: &Rat) -> Poly {
    let a = Poly::new(vec![-(s / int(6)), int(1)]);
    let b = Poly::new(vec![s / int(12), int(1)]);
    &a * &(&b * &b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub checks: Vec<Check>,
    pub curvature: Vec<CurvatureReport>,
    pub einstein_constant: Rat,
    pub bach_flat: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn verify_profile(pr: &Profile, pts: &[Point]) -> Result<Verification> {
    if pts.is_empty() {
        return Err(Error::Parameter("need at least one point".into()));
    }
    let ec = einstein_constant(pr)?;
    let bach_flat = pr.is_bach_flat();
    let scal = pr.scalar_curvature();
    let mut curvature = Vec::new();
    let (mut abreu, mut wplus, mut bach, mut lap, mut frame) = (0, 0, 0, 0, 0);
    let mut einstein = (0, 0, Rat::zero());
    for pt in pts {
        let expect = scal.at(&pt.r());
        if abreu_scal(pr, pt)? == expect {
            abreu += 1;
        }
        let c = match curvature_at(pr, pt) {
            Err(Error::Defect(_)) => {
                curvature.push(None);
                continue;
            }
            other => other?,
        };
        if c.weyl_plus_charpoly == weyl_plus_expected(&c.scal) {
            wplus += 1;
        }
        if c.bach_max_entry.is_zero() == bach_flat {
            bach += 1;
        }
        if let (Some(res), Some(l)) = (&c.einstein_residual, &c.lambda) {
            einstein.0 += 1;
            if res.is_zero() && l * int(4) == ec.from_q {
                einstein.1 += 1;
            } else if res.abs() > einstein.2 {
                einstein.2 = res.abs();
            }
        }
        let gammas = [Radial::Poly(Poly::from_ints(&[0, 0, 1])), Radial::Recip(Poly::new(vec![int(1), rat(1, 3)]))];
        if gammas.iter().all(|g| laplacian_check(pr, g, pt).map(|l| l.residual().is_zero()).unwrap_or(false)) {
            lap += 1;
        }
        let f = diagonal_frame_check(pr, pt)?;
        if f.reconstructs && f.cross.iter().all(Zero::is_zero) && f.coefficients == f.predicted {
            frame += 1;
        }
        curvature.push(Some(c));
    }
    let n = pts.len();
    let count = |k: usize| format!("{k}/{n} points");
    let mut checks = vec![
        Check::new("abreu_scalar", abreu == n, count(abreu)),
        Check::new("scalar_three_ways", curvature.iter().all(Option::is_some), count(curvature.iter().flatten().count())),
        Check::new("weyl_plus_spectrum", wplus == n, count(wplus)),
        Check::new(
            "bach",
            bach == n,
            format!("{} ({})", count(bach), if bach_flat { "expect Bach = 0" } else { "expect Bach != 0" }),
        ),
        Check::new("laplacian_lemma", lap == n, count(lap)),
        Check::new("diagonal_frame", frame == n, count(frame)),
    ];
    if bach_flat {
        let detail = if einstein.0 == 0 {
            "scal vanishes at every point".to_string()
        } else {
            format!("{}/{} points with scal != 0, worst residual {}", einstein.1, einstein.0, rs(&einstein.2))
        };
        checks.push(Check::new("conformal_einstein", einstein.0 == einstein.1, detail));
        let d = derdzinski_scalar_identity(pr, pts)?;
        let ok = d.constant && d.values.iter().all(|v| *v == ec.from_q);
        checks.push(Check::new("scalar_identity", ok, format!("S = {}", rs(&ec.from_q))));
    }
    Ok(Verification { checks, curvature: curvature.into_iter().flatten().collect(), einstein_constant: ec.from_q, bach_flat })
}
