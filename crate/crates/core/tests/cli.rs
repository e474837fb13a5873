use std::process::{Command, Output};

use serde_json::Value;

fn bspole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bspole")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["window_roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["root"]["s0"].as_str().unwrap().to_string(), v["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn analyze_quartic() {
    let out = bspole(&["analyze", "--poly", "x^4+y^3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(
        statuses(&report),
        [("-7/12", "Pole"), ("-5/6", "NotPoleSymmetry"), ("-11/12", "Pole")].map(|(a, b)| (a.to_string(), b.to_string()))
    );
    assert_eq!(report["input"]["weights"], serde_json::json!({"a": 3, "b": 4, "m": 12}));
    assert_eq!(report["tool"]["name"], "bspole");
    assert_eq!(report["milnor_number"], 6);
}

#[test]
fn analyze_cusp_and_determinism() {
    let a = bspole(&["analyze", "--poly", "x^2+y^3"]);
    let b = bspole(&["analyze", "--poly", "x^2+y^3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(statuses(&json(&a)), [("-5/6".to_string(), "Pole".to_string())]);
}

#[test]
fn thread_cap_does_not_change_output() {
    let capped = Command::new(env!("CARGO_BIN_EXE_bspole"))
        .args(["analyze", "--poly", "x^3+y^5"])
        .env("BSPOLE_THREADS", "1")
        .output()
        .unwrap();
    let free = bspole(&["analyze", "--poly", "x^3+y^5"]);
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(capped.stdout, free.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_bspole"))
        .args(["roots", "--poly", "x*y"])
        .env("BSPOLE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn validation_rejections_exit_2() {
    let out = bspole(&["analyze", "--poly", "x^2*y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-isolated singularity"));
    for poly in ["x^2 + y^3 + x", "x^2 + + y", "0"] {
        assert_eq!(bspole(&["analyze", "--poly", poly]).status.code(), Some(2), "{poly}");
    }
    assert_eq!(bspole(&["analyze", "--poly", "x^2+y^3", "--weights", "1,1,2"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(bspole(&[]).status.code(), Some(64));
    assert_eq!(bspole(&["analyze", "--poly", "x*y", "--format", "yaml"]).status.code(), Some(64));
    assert_eq!(bspole(&["integral", "--poly", "x*y", "--d", "2"]).status.code(), Some(64));
    assert_eq!(bspole(&["--version"]).status.code(), Some(0));
}

#[test]
fn gray_verdicts_exit_3() {
    // a zero threshold far above every integral makes the quadrature evidence inconclusive
    let out = bspole(&["analyze", "--poly", "x^4+y^3", "--zero-abs", "1.6", "--zero-rel", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert!(statuses(&report).iter().any(|(_, s)| s == "Indeterminate"));
}

#[test]
fn roots_subcommand() {
    let window = json(&bspole(&["roots", "--poly", "x^4+y^3", "--window"]));
    let s0s: Vec<&str> = window["window"].as_array().unwrap().iter().map(|r| r["s0"].as_str().unwrap()).collect();
    assert_eq!(s0s, ["-7/12", "-5/6", "-11/12"]);
    assert!(window.get("full").is_none());

    let full = json(&bspole(&["roots", "--poly", "x^2+y^3", "--full"]));
    assert_eq!(full["full"], serde_json::json!(["-7/6", "-1", "-5/6"]));

    let empty = json(&bspole(&["roots", "--poly", "x*y", "--window"]));
    assert_eq!(empty["window"], serde_json::json!([]));

    let csv = bspole(&["roots", "--poly", "x^2+y^3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("kind,s0,d,representations"));
    assert_eq!(text.lines().count(), 1 + 1 + 3);
}

#[test]
fn integral_subcommand() {
    let out = bspole(&["integral", "--poly", "x^2+y^3", "--d", "5", "--j", "0", "--k", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let value = r["integral"]["value"].as_f64().unwrap();
    assert!((value - 13.270393927727888).abs() < 1e-8, "{value}");
    assert!(r["integral"]["abs_error_estimate"].as_f64().unwrap() >= 0.0);
    assert!(r.get("note").is_none());

    let mismatch = bspole(&["integral", "--poly", "x^2+y^3", "--d", "5", "--j", "1", "--k", "0"]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("not a representation"));

    let sym = json(&bspole(&["integral", "--poly", "x^4+y^3", "--d", "10", "--j", "1", "--k", "0"]));
    assert!(sym["integral"]["value"].as_f64().unwrap().abs() <= 1e-10);
    assert_eq!(sym["symmetry_rule"], "x_parity_odd_j");
    assert!(sym["note"].as_str().unwrap().contains("exact 0"));
}

#[test]
fn residue_subcommand() {
    let out = bspole(&["residue", "--poly", "x^2+y^3", "--d", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["relative_difference"].as_f64().unwrap() < 1e-3);

    let sym = json(&bspole(&["residue", "--poly", "x^4+y^3", "--d", "10", "--i", "0", "--j", "0"]));
    assert_eq!(sym["closed_form"].as_f64().unwrap(), 0.0);
    assert!(sym["numeric_fit"].as_f64().unwrap().abs() < 1e-6);

    let outside = bspole(&["residue", "--poly", "x^2+y^3", "--d", "3"]);
    assert_eq!(outside.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&outside.stderr).contains("not a window numerator"));
}

#[test]
fn family_sweep_csv() {
    let out = bspole(&["analyze", "--family", "xny+xym", "--range", "2..3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,m,polynomial,weights,d,s0,status,representations,evidence"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.starts_with("xny+xym,")));

    let text = bspole(&["analyze", "--family", "xn+ym", "--range", "2..3,3", "--format", "text"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("x^2 + y^3") && text.contains("x^3 + y^3"));
}
