//! Serializable views of the library's results.
//!
//! Exact numbers are always strings ("num/den", or "re+im*sqrt(d)" in a quadratic
//! field). Floating-point shadows sit next to them under `*_f64` names and are
//! for reading only.

use std::collections::BTreeMap;

use num::Signed;
use serde::{Deserialize, Serialize};

use crate::ansatz::{ConeProfile, Profile};
use crate::classifier::{AtlasRegion, Classification, Value};
use crate::conesolver::{admissibility, ConeQuadratic, SweepRow};
use crate::convexity::PositivityCertificate;
use crate::curvlab::CurvatureReport;
use crate::error::{Error, Result};
use crate::exact::{int, parse_rat, to_f64, Rat};
use crate::field::Field;
use crate::geoprobe::{GrowthEstimate, Integral, Model};
use crate::poly::Poly;
use crate::roots::IsolatedRoot;
use crate::suites::NamedIdentity;
use crate::surd::Surd;

pub const SCHEMA_VERSION: &str = "1.0";
pub const CONVENTION: &str = "factorial-stored";

pub fn rs(r: &Rat) -> String {
    r.to_string()
}

pub fn poly_strings<F: Field>(p: &Poly<F>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn mat_strings(m: &[Vec<Rat>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(rs).collect()).collect()
}

/// Parse "r", "r+s*sqrt(d)", "r-s*sqrt(d)" or "s*sqrt(d)".
pub fn parse_surd(s: &str) -> Result<Surd> {
    let t = s.trim();
    let Some(k) = t.find("*sqrt(") else {
        return Ok(Surd::rational(parse_rat(t)?));
    };
    let bad = || Error::Parse(format!("not a quadratic surd: {s:?}"));
    let d = t[k + 6..].strip_suffix(')').ok_or_else(bad)?;
    let d = parse_rat(d)?;
    let head = &t[..k];
    let split = head.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (re, im) = match split {
        Some(i) if !head[..i].ends_with(['e', 'E']) => (parse_rat(&head[..i])?, parse_rat(&head[i..])?),
        _ => (int(0), parse_rat(head)?),
    };
    Surd::new(re, im, &d).ok_or_else(bad)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub convention: String,
    pub m: u32,
    pub a: String,
    /// Monomial coefficients [q0, q1, 0, q3/6, q4/24].
    pub q: Vec<String>,
    pub y: String,
    pub p_poly: Vec<String>,
    /// scal(r) = scal[0] + scal[1]·r.
    pub scal: Vec<String>,
    pub bach_flat: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeJson {
    pub x: String,
    pub b: String,
    pub weight: String,
    pub weight_f64: f64,
    pub angle_over_2pi: String,
}

impl ProfileJson {
    pub fn from_profile<F: Field>(pr: &Profile<F>) -> Self {
        ProfileJson {
            convention: CONVENTION.into(),
            m: pr.m,
            a: rs(&pr.a),
            q: {
                let mut q = poly_strings(&pr.q_poly());
                q.resize(5, "0".into());
                q
            },
            y: pr.y().to_string(),
            p_poly: poly_strings(&pr.p_poly()),
            scal: poly_strings(&pr.scalar_curvature().poly()),
            bach_flat: pr.is_bach_flat(),
            cone: None,
        }
    }

    pub fn from_cone<F: Field>(cp: &ConeProfile<F>) -> Self {
        let mut j = Self::from_profile(&cp.base);
        j.cone = Some(ConeJson {
            x: rs(&cp.x),
            b: rs(&cp.b),
            weight: cp.weight.to_string(),
            weight_f64: cp.weight.approx(),
            angle_over_2pi: (F::one() / cp.weight.clone()).to_string(),
        });
        j
    }

    fn coeffs(&self) -> Result<(u32, Rat, Vec<Surd>)> {
        if self.convention != CONVENTION {
            return Err(Error::Parameter(format!("unknown convention {:?}", self.convention)));
        }
        if self.m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        let a = parse_rat(&self.a)?;
        if !a.is_positive() {
            return Err(Error::Parameter("a must be positive".into()));
        }
        let mut q = self.q.iter().map(|c| parse_surd(c)).collect::<Result<Vec<_>>>()?;
        q.resize(5, Surd::rational(int(0)));
        if q.len() > 5 || q[2] != Surd::rational(int(0)) {
            return Err(Error::Parameter("q must be [q0, q1, 0, q3/6, q4/24]".into()));
        }
        Ok((self.m, a, q))
    }

    pub fn is_rational(&self) -> Result<bool> {
        Ok(self.coeffs()?.2.iter().all(|c| c.as_rat().is_some()))
    }

    pub fn to_profile(&self) -> Result<Profile> {
        let (m, a, q) = self.coeffs()?;
        let r = |s: &Surd| s.as_rat().ok_or_else(|| Error::Parameter("profile has irrational coefficients".into()));
        Ok(Profile { m, a, q0: r(&q[0])?, q1: r(&q[1])?, q3: r(&q[3])? * int(6), q4: r(&q[4])? * int(24) })
    }

    pub fn to_surd_profile(&self) -> Result<Profile<Surd>> {
        let (m, a, q) = self.coeffs()?;
        let six = Surd::rational(int(6));
        let tf = Surd::rational(int(24));
        Ok(Profile { m, a, q0: q[0].clone(), q1: q[1].clone(), q3: q[3].clone() * six, q4: q[4].clone() * tf })
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootJson {
    pub lo: String,
    pub hi: String,
    pub exact: Option<String>,
    pub multiplicity: u32,
    pub decimal: String,
}

impl RootJson {
    pub fn new(r: &IsolatedRoot) -> Self {
        RootJson {
            lo: rs(&r.lo),
            hi: rs(&r.hi),
            exact: r.exact().map(rs),
            multiplicity: r.multiplicity,
            decimal: r.decimal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueJson {
    pub exact: Option<String>,
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub approx: f64,
}

impl ValueJson {
    pub fn new<F: Field>(v: &Value<F>) -> Self {
        match v {
            Value::Exact(x) => ValueJson { exact: Some(x.to_string()), lo: None, hi: None, approx: x.approx() },
            Value::Enclosed(i) => {
                ValueJson { exact: None, lo: Some(rs(&i.lo)), hi: Some(rs(&i.hi)), approx: v.approx() }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateJson {
    pub positive: bool,
    pub method: String,
    pub a: String,
    pub b: String,
    pub end_multiplicity: [u32; 2],
    pub interior_roots: Vec<RootJson>,
    pub witness: Option<String>,
}

impl CertificateJson {
    pub fn new(c: &PositivityCertificate) -> Self {
        CertificateJson {
            positive: c.positive,
            method: format!("{:?}", c.method),
            a: rs(&c.a),
            b: rs(&c.b),
            end_multiplicity: [c.end_multiplicity.0, c.end_multiplicity.1],
            interior_roots: c.interior_roots.iter().map(RootJson::new).collect(),
            witness: c.witness.as_ref().map(rs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationJson {
    pub kind: String,
    pub p_degree: usize,
    pub roots: Vec<RootJson>,
    pub b: Option<RootJson>,
    pub weight: Option<ValueJson>,
    pub angle_over_2pi: Option<ValueJson>,
    pub certificate: Option<CertificateJson>,
}

impl ClassificationJson {
    pub fn new<F: Field>(c: &Classification<F>, cert: Option<&PositivityCertificate>) -> Self {
        ClassificationJson {
            kind: c.kind.to_string(),
            p_degree: c.p_degree,
            roots: c.roots.iter().map(RootJson::new).collect(),
            b: c.b.as_ref().map(RootJson::new),
            weight: c.weight.as_ref().map(ValueJson::new),
            angle_over_2pi: c.angle_over_2pi.as_ref().map(ValueJson::new),
            certificate: cert.map(CertificateJson::new),
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityJson {
    pub r1: String,
    pub r2: Option<String>,
    pub d: String,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightJson {
    pub branch: String,
    pub value: String,
    pub value_f64: f64,
    pub multiplicity: u32,
    pub angle_over_2pi_f64: f64,
    pub positive: bool,
    pub admissibility: Option<AdmissibilityJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeSolveJson {
    pub m: u32,
    pub x: String,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    pub disc: String,
    pub status: String,
    pub roots: Vec<WeightJson>,
}

impl ConeSolveJson {
    pub fn new(q: &ConeQuadratic) -> Result<Self> {
        let mut roots = Vec::new();
        for w in &q.roots {
            let positive = w.value.sign() > 0;
            let admissibility = if positive {
                let ad = admissibility(q.m, &q.x, &w.value)?;
                Some(AdmissibilityJson {
                    r1: rs(&ad.r1),
                    r2: ad.r2.as_ref().map(rs),
                    d: rs(&ad.d),
                    verdict: ad.verdict.to_string(),
                })
            } else {
                None
            };
            roots.push(WeightJson {
                branch: w.branch.to_string(),
                value: w.value.to_string(),
                value_f64: w.value.approx(),
                multiplicity: w.multiplicity,
                angle_over_2pi_f64: 1.0 / w.value.approx(),
                positive,
                admissibility,
            });
        }
        let status = if roots.iter().any(|r| r.positive) { "solutions" } else { "nonexistence" };
        Ok(ConeSolveJson {
            m: q.m,
            x: rs(&q.x),
            a: rs(&q.a),
            b: rs(&q.b),
            c: rs(&q.c),
            disc: rs(&q.discriminant),
            status: status.into(),
            roots,
        })
    }
}

pub const SWEEP_HEADER: [&str; 13] =
    ["m", "x", "A", "B", "C", "disc", "p_minus", "p_plus", "r1", "r2", "d", "verdict_minus", "verdict_plus"];

pub fn sweep_record(row: &SweepRow) -> [String; 13] {
    let q = &row.quadratic;
    let part = |v: &Option<(Surd, crate::conesolver::Verdict)>| match v {
        Some((w, verdict)) => (w.to_string(), verdict.to_string()),
        None => (String::new(), String::new()),
    };
    let (pm, vm) = part(&row.minus);
    let (pp, vp) = part(&row.plus);
    [
        q.m.to_string(),
        rs(&q.x),
        rs(&q.a),
        rs(&q.b),
        rs(&q.c),
        rs(&q.discriminant),
        pm,
        pp,
        rs(&row.r1),
        row.r2.as_ref().map(rs).unwrap_or_default(),
        rs(&row.d),
        vm,
        vp,
    ]
}

pub const ATLAS_HEADER: [&str; 9] =
    ["m", "y", "location", "coincident", "space", "metric_type", "einstein_scalar_sign", "expected_kind", "kind"];

pub fn atlas_record(r: &AtlasRegion, kind: &str) -> [String; 9] {
    [
        r.m.to_string(),
        rs(&r.y),
        r.location.to_string(),
        r.coincident.iter().map(|b| b.label()).collect::<Vec<_>>().join(" "),
        r.space.to_string(),
        r.metric_type.to_string(),
        r.einstein_scalar_sign.to_string(),
        crate::classifier::expected_kind(r).to_string(),
        kind.to_string(),
    ]
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureJson {
    pub x1: String,
    pub x2: String,
    pub metric: Vec<Vec<String>>,
    pub scal: String,
    pub scal_f64: f64,
    pub ricci: Vec<Vec<String>>,
    pub weyl_plus_charpoly: Vec<String>,
    pub bach_max_entry: String,
    pub einstein_residual: Option<String>,
    pub lambda: Option<String>,
}

impl CurvatureJson {
    pub fn new(c: &CurvatureReport) -> Self {
        CurvatureJson {
            x1: rs(&c.point.x1),
            x2: rs(&c.point.x2),
            metric: mat_strings(&c.metric),
            scal: rs(&c.scal),
            scal_f64: to_f64(&c.scal),
            ricci: mat_strings(&c.ricci),
            weyl_plus_charpoly: poly_strings(&c.weyl_plus_charpoly),
            bach_max_entry: rs(&c.bach_max_entry),
            einstein_residual: c.einstein_residual.as_ref().map(rs),
            lambda: c.lambda.as_ref().map(rs),
        }
    }
}

/// One named pass/fail line of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralJson {
    pub finite: bool,
    pub value: Option<f64>,
    pub error: Option<f64>,
    pub endpoint: Option<String>,
    pub exponent: Option<String>,
}

impl IntegralJson {
    pub fn new(i: &Integral) -> Self {
        match i {
            Integral::Finite { value, error } => {
                IntegralJson { finite: true, value: Some(*value), error: Some(*error), endpoint: None, exponent: None }
            }
            Integral::Diverges { endpoint, exponent } => IntegralJson {
                finite: false,
                value: None,
                error: None,
                endpoint: Some(endpoint.to_string()),
                exponent: Some(rs(exponent)),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthJson {
    pub model: String,
    pub exponent: Option<f64>,
    pub rate: Option<f64>,
    pub total_volume: Option<f64>,
    pub residual: f64,
    pub end: String,
    pub samples: usize,
}

impl GrowthJson {
    pub fn new(g: &GrowthEstimate) -> Self {
        let (model, exponent, rate, total_volume) = match g.model {
            Model::Polynomial { exponent } => ("polynomial", Some(exponent), None, None),
            Model::Exponential { rate } => ("exponential", None, Some(rate), None),
            Model::Finite { total_volume } => ("finite", None, None, Some(total_volume)),
        };
        GrowthJson {
            model: model.into(),
            exponent,
            rate,
            total_volume,
            residual: g.residual,
            end: g.end.to_string(),
            samples: g.samples.len(),
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityFailureJson {
    pub m: i64,
    pub difference: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityJson {
    pub name: String,
    pub holds: bool,
    pub checked: Vec<i64>,
    pub failures: Vec<IdentityFailureJson>,
}

impl IdentityJson {
    pub fn new(n: &NamedIdentity) -> Self {
        IdentityJson {
            name: n.name.into(),
            holds: n.report.holds,
            checked: n.report.checked.clone(),
            failures: n
                .report
                .failures
                .iter()
                .map(|(m, d)| IdentityFailureJson { m: *m, difference: poly_strings(d) })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------

/// The envelope every CLI command emits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: T,
    pub notes: Vec<String>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, inputs: BTreeMap<String, String>, outputs: T, notes: Vec<String>) -> Self {
        Report { schema_version: SCHEMA_VERSION, command: command.into(), inputs, outputs, notes }
    }
}
