use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn calabi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calabi")).args(args).env_remove("CALABI_PRECISION").output().unwrap()
}

fn calabi_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_calabi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn cone_solve_m1_x3() {
    let v = json(&calabi(&["cone-solve", "--m", "1", "--x", "3"]));
    assert_eq!(v["schema_version"], "1.0");
    assert_eq!(v["command"], "cone-solve");
    let roots = v["outputs"]["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert_eq!(roots[0]["value"], "12/11");
    assert_eq!(roots[0]["admissibility"]["r1"], "6/11");
    assert_eq!(roots[0]["admissibility"]["d"], "15/11");
    assert_eq!(roots[0]["admissibility"]["verdict"], "nowhere-vanishing");
}

#[test]
fn cone_solve_m2_is_nonexistence() {
    let o = calabi(&["cone-solve", "--m", "2", "--x", "7/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["outputs"]["status"], "nonexistence");
    assert!(v["outputs"]["roots"].as_array().unwrap().is_empty());
}

#[test]
fn verify_taub_bolt() {
    let o = calabi(&["verify", "--m", "1", "--a", "1", "--s", "6", "--points", "10"]);
    let v = json(&o);
    assert_eq!(v["outputs"]["passed"], true);
    assert_eq!(v["outputs"]["einstein_constant"], "0");
    assert_eq!(v["outputs"]["points"].as_array().unwrap().len(), 10);
    for c in v["outputs"]["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true, "{c}");
    }
}

#[test]
fn output_is_byte_stable_and_seeded() {
    let args = ["verify", "--m", "3", "--s", "-4", "--points", "3", "--seed", "11"];
    let a = calabi(&args);
    let b = calabi(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = calabi(&["verify", "--m", "3", "--s", "-4", "--points", "3", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn construct_then_classify_through_stdin() {
    let o = calabi(&["construct", "--m", "1", "--s", "6"]);
    let v = json(&o);
    let p = &v["outputs"];
    assert_eq!(p["convention"], "factorial-stored");
    assert_eq!(p["q"], serde_json::json!(["9/8", "-3/4", "0", "3/4", "-1/8"]));
    assert_eq!(p["scal"], serde_json::json!(["9", "-3"]));
    // both the bare profile and the full report are accepted
    for input in [o.stdout.clone(), serde_json::to_vec(p).unwrap()] {
        let c = json(&calabi_stdin(&["classify", "--profile", "-"], &input));
        let cl = &c["outputs"]["classification"];
        assert_eq!(cl["kind"], "CompleteFiniteVolume");
        assert_eq!(cl["b"]["exact"], "3");
        assert_eq!(cl["b"]["multiplicity"], 2);
        assert_eq!(cl["certificate"]["positive"], true);
    }
}

#[test]
fn classify_inline_cone() {
    let c = json(&calabi(&["classify", "--m", "1", "--x", "3", "--branch", "plus"]));
    let cl = &c["outputs"]["classification"];
    assert_eq!(cl["kind"], "ConeAngleCompactification");
    assert_eq!(cl["weight"]["exact"], "12/11");
    assert_eq!(cl["angle_over_2pi"]["exact"], "11/12");
    let w = json(&calabi(&["construct-cone", "--m", "1", "--x", "3", "--weight", "12/11"]));
    assert_eq!(w["outputs"]["cone"]["b"], "3");
    assert_eq!(w["outputs"]["bach_flat"], true);
}

#[test]
fn irrational_weight_round_trip() {
    let o = calabi(&["construct-cone", "--m", "3", "--x", "100", "--branch", "minus"]);
    let v = json(&o);
    assert!(v["outputs"]["cone"]["weight"].as_str().unwrap().contains("sqrt("));
    let c = json(&calabi_stdin(&["classify", "--profile", "-"], &o.stdout));
    assert_eq!(c["outputs"]["classification"]["kind"], "ConeAngleCompactification");
    assert_eq!(c["outputs"]["classification"]["certificate"]["positive"], true);
}

#[test]
fn atlas_csv() {
    let o = calabi(&["atlas", "--m", "3", "--y-grid", "-60:10:8"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,y,location,coincident,space,metric_type,einstein_scalar_sign,expected_kind,kind");
    assert_eq!(lines.len(), 9);
    assert!(!text.contains('\r'));
    assert!(lines[7].starts_with("3,0,0,"));
}

#[test]
fn sweep_csv() {
    let dir = std::env::temp_dir().join(format!("calabi-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("spec.json");
    std::fs::write(&spec, r#"{"m": [2, 1], "x": ["3", "7/2"]}"#).unwrap();
    let o = calabi(&["sweep", "--spec", spec.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,x,A,B,C,disc,p_minus,p_plus,r1,r2,d,verdict_minus,verdict_plus");
    assert_eq!(lines[1], "1,3,0,-132,144,17424,,12/11,6/11,,15/11,,nowhere-vanishing");
    assert!(lines[3].starts_with("2,3,"));
    assert_eq!(lines.len(), 5);
    std::fs::write(&spec, r#"{"m": [1], "x": ["1"]}"#).unwrap();
    assert_eq!(calabi(&["sweep", "--spec", spec.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn probe_growth() {
    let v = json(&calabi(&["probe", "--m", "2", "--s", "0", "--growth"]));
    let g = &v["outputs"]["growth"];
    assert_eq!(g["model"], "polynomial");
    assert!((g["exponent"].as_f64().unwrap() - 4.0).abs() < 0.1);
    let v = json(&calabi(&["probe", "--m", "1", "--s", "6", "--growth", "--conformal"]));
    assert!((v["outputs"]["growth"]["exponent"].as_f64().unwrap() - 3.0).abs() < 0.1);
    let v = json(&calabi(&["probe", "--m", "1", "--s", "6", "--length"]));
    assert_eq!(v["outputs"]["length"]["finite"], false);
    assert_eq!(v["outputs"]["length"]["endpoint"], "3");
}

#[test]
fn identities_suites() {
    for s in ["coneDisc", "appendixA", "appendixB", "sFormulas"] {
        let v = json(&calabi(&["identities", "--suite", s, "--m-range", "1:8"]));
        for id in v["outputs"].as_array().unwrap() {
            assert_eq!(id["holds"], true, "{s}: {id}");
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(calabi(&["identities", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(calabi(&["construct", "--m", "0", "--s", "1"]).status.code(), Some(2));
    assert_eq!(calabi(&["construct", "--m", "1", "--s", "abc"]).status.code(), Some(2));
    assert_eq!(calabi(&["cone-solve", "--m", "1", "--x", "1"]).status.code(), Some(3));
    assert_eq!(calabi(&["probe", "--m", "1", "--s", "6"]).status.code(), Some(2));
    let bad = calabi_stdin(&["classify", "--profile", "-"], br#"{"convention":"taylor","m":1,"a":"1","q":[],"y":"0","p_poly":[],"scal":[],"bach_flat":true}"#);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn precision_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_calabi"))
        .args(["classify", "--m", "3", "--s", "-7/3"])
        .env("CALABI_PRECISION", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_calabi"))
        .args(["classify", "--m", "1", "--x", "7/2", "--branch", "plus"])
        .env("CALABI_PRECISION", "8")
        .output()
        .unwrap();
    let v = json(&o);
    let b = &v["outputs"]["classification"]["b"];
    assert_eq!(b["exact"], "7/2");
}

#[test]
fn decimals_are_exact() {
    let a = json(&calabi(&["cone-solve", "--m", "1", "--x", "3.5"]));
    let b = json(&calabi(&["cone-solve", "--m", "1", "--x", "7/2"]));
    assert_eq!(a["outputs"], b["outputs"]);
}

#[test]
fn schema_matches_the_envelope() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = json(&calabi(&["construct", "--m", "2", "--s", "1/3"]));
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    let mut required: Vec<&str> = schema["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect();
    required.sort_unstable();
    assert_eq!(keys, required);
    let profile_keys = schema["$defs"]["profile"]["required"].as_array().unwrap();
    for k in profile_keys {
        assert!(v["outputs"].get(k.as_str().unwrap()).is_some(), "{k}");
    }
}
