use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn loghen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loghen")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("loghen-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn verify_exit_codes() {
    let ok = loghen(&["verify", "--p", "2", "--suite", "pairing,trace"]);
    assert_eq!(ok.status.code(), Some(0));
    let doc = json_of(&ok);
    assert_eq!(doc["passed"], true);
    let names: Vec<&str> = doc["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 2);

    let usage = loghen(&["verify", "--p", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    assert!(usage.stdout.is_empty());
}

#[test]
fn wrong_convention_fails_the_tangle_suite() {
    let out = loghen(&["verify", "--p", "2", "--suite", "tangle", "--convention", "B"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn invariant_anchors_from_files() {
    let s3 = scratch(
        "s3.json",
        r#"{"p": 2, "strands": 1, "word": [], "components": [{"strands": [1], "cut": 1, "role": "surgery", "framing": 1}]}"#,
    );
    let out = loghen(&["invariant", s3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["exact"], "1");
    assert_eq!(v["mode"], "hlog");
    assert!((v["approx"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let s1s2 = scratch(
        "s1s2.json",
        r#"{"strands": 1, "word": [], "components": [{"strands": [1], "cut": 1, "role": "surgery", "framing": 0}]}"#,
    );
    let v = json_of(&loghen(&["invariant", s1s2.to_str().unwrap(), "--p", "2", "--mode", "hennings"]));
    assert_eq!(v["exact"], "0");

    let mismatch = loghen(&["invariant", s3.to_str().unwrap(), "--p", "3"]);
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("error"));
}

#[test]
fn routes_and_runs_agree() {
    let trefoil = scratch(
        "trefoil.json",
        r#"{"p": 2, "strands": 3, "word": [1, 1, 1, 2, 2], "components": [
            {"strands": [1, 2], "cut": 1, "role": "minus", "framing": 0, "color": {"h+1": 1, "h-2": 2}},
            {"strands": [3], "cut": 3, "role": "surgery", "framing": 1}]}"#,
    );
    let path = trefoil.to_str().unwrap();
    let a = loghen(&["invariant", path]);
    let b = loghen(&["invariant", path]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let slow = json_of(&loghen(&["invariant", path, "--route", "partial"]));
    assert_eq!(json_of(&a)["exact"], slow["exact"]);
}

#[test]
fn tables_to_file() {
    let out = std::env::temp_dir().join(format!("loghen-cli-{}-tables.json", std::process::id()));
    let run = loghen(&["tables", "--p", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pairing_matches_closed_form"], true);
    assert_eq!(v["p"], 2);
}
