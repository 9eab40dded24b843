use std::process::{Command, Output};

use rug::Float;
use serde_json::Value;

fn rhopoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhopoly")).args(args).env_remove("RHOPOLY_PRECISION_BITS").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = rhopoly(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), doc)
}

fn value(doc: &Value) -> Float {
    let s = doc["data"]["points"][0]["value"].as_str().expect("value");
    Float::with_val(320, Float::parse(s).unwrap())
}

#[test]
fn weights_closed_forms() {
    let (code, doc) = json(&["weights", "--which", "rho", "--nu", "0.5", "--x", "1"]);
    assert_eq!(code, 0);
    let want = Float::with_val(320, rug::float::Constant::Pi).sqrt() * Float::with_val(320, -2).exp();
    assert!((value(&doc) - &want).abs() / want < 1e-38);

    let (code, doc) = json(&["weights", "--which", "rho2", "--nu", "0.5", "--x", "1"]);
    assert_eq!(code, 0);
    let want = Float::with_val(320, rug::float::Constant::Pi) * Float::with_val(320, -4).exp();
    assert!((value(&doc) - &want).abs() / want < 1e-38);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| rhopoly(args).status.code().unwrap();
    assert_eq!(code(&["weights", "--which", "rho", "--x", "1"]), 2);
    assert_eq!(code(&["ortho", "--nu", "-0.6", "--n", "2"]), 2);
    assert_eq!(code(&["verify", "--suite", "remark3", "--format", "csv"]), 2);
    assert_eq!(code(&["weights", "--which", "rho", "--nu", "0.5", "--x", "1e12"]), 3);
    assert_eq!(code(&["--verify-tol", "1e-100", "--quad-target", "1e-100", "mop", "--check", "t6", "--nu", "0.25", "--n", "0"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn ortho_shape_and_determinism() {
    let args = ["ortho", "--nu", "0.5", "--n", "3", "--method", "gram"];
    let (code, mut a) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(a["schema_version"], "1");
    assert_eq!(a["data"]["gram"]["polynomials"].as_array().unwrap().len(), 4);
    assert_eq!(a["pass"], true);
    let (_, mut b) = json(&args);
    a.as_object_mut().unwrap().remove("wall_time_s");
    b.as_object_mut().unwrap().remove("wall_time_s");
    assert_eq!(a, b);
}

#[test]
fn ortho_routes_agree() {
    let out = rhopoly(&["ortho", "--nu", "0.5", "--n", "2", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("cramer vs gram") && l.starts_with("PASS")).count(), 3);
}

#[test]
fn mop_examples() {
    let (code, doc) = json(&["mop", "--type", "2", "--nu", "0.25", "--alpha", "0", "--n", "0"]);
    assert_eq!(code, 0);
    let p = doc["data"]["p"].as_array().unwrap();
    assert_eq!(p.len(), 3);
    assert_eq!(Float::with_val(64, Float::parse(p[2].as_str().unwrap()).unwrap()), 1);

    let (code, doc) = json(&["mop", "--type", "1", "--nu", "0.25", "--alpha", "0", "--n", "1"]);
    assert_eq!(code, 0);
    let a = doc["data"]["A"].as_array().unwrap();
    assert_eq!(Float::with_val(64, Float::parse(a.last().unwrap().as_str().unwrap()).unwrap()), 1);
    assert_eq!(doc["results"].as_array().unwrap().len(), 3);

    let (code, doc) = json(&["mop", "--check", "t6", "--nu", "0.25", "--alpha", "0", "--n", "0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["results"][0]["eq"], "A.4");
}

#[test]
fn verify_suites() {
    let (code, doc) = json(&["verify", "--suite", "prop6", "--nu", "0.5", "--nmax", "3"]);
    assert_eq!(code, 0);
    let eqs: Vec<&str> = doc["results"].as_array().unwrap().iter().map(|r| r["eq"].as_str().unwrap()).collect();
    assert_eq!(eqs.len(), 16);
    for e in ["4.5", "4.6", "4.7", "4.8"] {
        assert_eq!(eqs.iter().filter(|&&x| x == e).count(), 4);
    }
    let (code, doc) = json(&["verify", "--suite", "remark3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["pass"], true);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rhopoly"))
        .args(["weights", "--which", "rho", "--nu", "0.5", "--x", "1", "--format", "json"])
        .env("RHOPOLY_PRECISION_BITS", "128")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["parameters"]["precision_bits"], 128);
}
