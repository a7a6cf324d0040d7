use std::process::{Command, Output};

use serde_json::Value;

fn atkin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atkin")).args(args).output().expect("run atkin")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn atkin_degree_two() {
    let out = atkin(&["atkin", "--n", "2", "--scale", "original"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "atkin");
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["269280", "-1640", "1"]));
}

#[test]
fn rep3_base_case() {
    let out = atkin(&["rep-check", "--n", "0", "--which", "rep3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["equal"], true);
    assert_eq!(v["results"]["representation"], serde_json::json!(["-5/12", "1"]));
}

#[test]
fn printed_rep1_scalar_is_a_verification_failure() {
    let out = atkin(&["rep-check", "--n", "1", "--which", "rep1", "--rep1-coefficient", "91/384"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["results"]["equal"], false);
}

#[test]
fn supersingular_small_primes() {
    let out = atkin(&["supersingular", "--pmax", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json(&out)["results"]["records"].as_array().unwrap().clone();
    assert_eq!(records.len(), 4);
    assert!(records.iter().all(|r| r["status"] == "matched"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(atkin(&["atkin", "--n", "x"]).status.code(), Some(1));
    assert_eq!(atkin(&["no-such-command"]).status.code(), Some(1));
    let out = atkin(&["assoc-jacobi", "--n", "2", "--alpha", "1/0", "--beta", "0", "--c", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn rationals_are_strings_and_output_is_deterministic() {
    let args = ["assoc-jacobi", "--n", "2", "--alpha", "1/2", "--beta", "-2/3", "--c", "7/12", "--variant", "calv"];
    let a = atkin(&args);
    let b = atkin(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["results"]["coefficients"], serde_json::json!(["124729/2488320", "-347/480", "1"]));
    assert_eq!(v["inputs"]["beta"], "-2/3");
}

#[test]
fn genfun_and_weight_report_reals() {
    let out = atkin(&["--pretty", "genfun", "--kind", "catalan", "--x", "0.7", "--t", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["results"]["residual"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["float_digits"], 17);

    let printed = atkin(&["genfun", "--kind", "catalan", "--x", "0.7", "--t", "0.1", "--form", "as-printed"]);
    assert_eq!(printed.status.code(), Some(2));

    let w = json(&atkin(&["weight", "--moments", "1", "--grid", "3"]));
    let m = w["results"]["moments"].as_array().unwrap();
    assert!((m[0].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(w["results"]["grid"].as_array().unwrap().len(), 3);
}

#[test]
fn gram_dump() {
    let v = json(&atkin(&["gram", "--n", "2"]));
    let g11 = v["results"]["entries"][1][1].as_f64().unwrap();
    assert!((g11 - 393_120.0).abs() <= 1e-6 * 393_120.0);
    assert_eq!(atkin(&["gram", "--n", "9"]).status.code(), Some(1));
}
