mod common;

use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_varsel");
const MODELS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/models");

fn varsel(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn select_prints_the_queue() {
    let (code, out, _) = varsel(&["select", common::HEART_CSV]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let items: Vec<&str> = v["queue"]["items"].as_array().unwrap().iter().map(|i| i.as_str().unwrap()).collect();
    assert_eq!(items, ["LINEAR_SVC", "KNN", "RBF_SVC", "ENSEMBLE", "TOUGH_LUCK"]);

    let (code, out, _) = varsel(&["select", common::HEART_CSV, "--sample-size", "120000", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1. SGD_CLASSIFIER"));
}

#[test]
fn run_is_byte_deterministic_and_exhausted_is_success() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _, _) = varsel(&["run", common::HEART_CSV, "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let (code, out, _) = varsel(&["run", common::HEART_CSV, "--threshold", "1.01"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"EXHAUSTED\""));
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(varsel(&["run", common::HEART_CSV, "--metric", "zzz"]).0, 1);
    assert_eq!(varsel(&["profile", "/nonexistent.csv"]).0, 1);
    assert_eq!(varsel(&["profile", common::HEART_CSV, "--target", "nope"]).0, 1);
    assert_eq!(varsel(&["bogus-command"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fm");
    std::fs::write(&bad, "feature A mandatory\n  feature A optional\n").unwrap();
    let (code, _, err) = varsel(&["fm", "validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("DUPLICATE_ID"), "{err}");
}

#[test]
fn fm_subcommands() {
    let techniques = format!("{MODELS}/ml_techniques.fm");
    let (code, out, _) = varsel(&["fm", "validate", &techniques, "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("valid"));

    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.fm");
    std::fs::write(&small, "feature R mandatory\n  or {\n    feature A\n    feature B\n  }\nconstraint A => B\n")
        .unwrap();
    let (code, out, _) = varsel(&["fm", "enumerate", small.to_str().unwrap(), "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{A,B,R}\n{B,R}\n");

    let (code, out, _) = varsel(&["fm", "render", small.to_str().unwrap(), "--highlight", "R,B"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    let (code, _, _) = varsel(&["fm", "render", small.to_str().unwrap(), "--highlight", "R,A"]);
    assert_eq!(code, 1);
}

#[test]
fn audit_command() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.csv");
    std::fs::write(&p, "row_id,y_true,y_pred,group\n1,1,1,m\n2,1,0,m\n3,1,1,f\n4,0,0,f\n").unwrap();
    let (code, out, _) = varsel(&["audit", p.to_str().unwrap(), "--protected-value", "m", "--positive-label", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["fairness"]["eoo"], -0.5);
}
