//! Browser bindings. Each export takes plain strings and returns a JSON string,
//! or throws a string describing the error.

use wasm_bindgen::prelude::*;

use calabi::ansatz::{profile_from_cone, profile_from_local};
use calabi::classifier::classify;
use calabi::conesolver::{cone_quadratic, Branch};
use calabi::convexity::{certify_positive, certify_positive_on};
use calabi::exact::parse_rat;
use calabi::report::{ClassificationJson, ConeSolveJson, ProfileJson};
use calabi::{Error, Field};

fn to_json(v: &serde_json::Value) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Profile from (m, a, s) together with its classification.
pub fn construct_json(m: u32, a: &str, s: &str) -> Result<String, String> {
    let a = parse_rat(a).map_err(err)?;
    let s = parse_rat(s).map_err(err)?;
    let pr = profile_from_local(m, &a, &s).map_err(err)?;
    let c = classify(&pr).map_err(err)?;
    let cert = match c.b.as_ref().and_then(|b| b.exact()) {
        Some(b) => Some(certify_positive_on(&pr.p_poly(), &pr.a, b).map_err(err)?),
        None => None,
    };
    to_json(&serde_json::json!({
        "profile": ProfileJson::from_profile(&pr),
        "classification": ClassificationJson::new(&c, cert.as_ref()),
    }))
}

pub fn cone_solve_json(m: u32, x: &str) -> Result<String, String> {
    let x = parse_rat(x).map_err(err)?;
    let q = cone_quadratic(m, &x).map_err(err)?;
    serde_json::to_string(&ConeSolveJson::new(&q).map_err(err)?).map_err(|e| e.to_string())
}

/// The cone profile on the chosen branch ("plus" or "minus"), classified and certified.
pub fn cone_profile_json(m: u32, x: &str, branch: &str) -> Result<String, String> {
    let x = parse_rat(x).map_err(err)?;
    let br = match branch {
        "plus" => Branch::Plus,
        "minus" => Branch::Minus,
        other => return Err(format!("unknown branch {other:?}")),
    };
    let q = cone_quadratic(m, &x).map_err(err)?;
    let w = q
        .branch(br)
        .or_else(|| q.branch(Branch::Double))
        .filter(|w| w.value.sign() > 0)
        .ok_or_else(|| format!("no positive {br} weight at m = {m}, x = {x}"))?;
    let cp = profile_from_cone(m, &calabi::exact::int(1), &x, w.value.clone()).map_err(err)?;
    let c = classify(&cp.base).map_err(err)?;
    let cert = certify_positive(&cp).map_err(err)?;
    to_json(&serde_json::json!({
        "profile": ProfileJson::from_cone(&cp),
        "classification": ClassificationJson::new(&c, Some(&cert)),
    }))
}

#[wasm_bindgen]
pub fn construct(m: u32, a: &str, s: &str) -> Result<String, JsValue> {
    construct_json(m, a, s).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = coneSolve)]
pub fn cone_solve(m: u32, x: &str) -> Result<String, JsValue> {
    cone_solve_json(m, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = coneProfile)]
pub fn cone_profile(m: u32, x: &str, branch: &str) -> Result<String, JsValue> {
    cone_profile_json(m, x, branch).map_err(|e| JsValue::from_str(&e))
}
