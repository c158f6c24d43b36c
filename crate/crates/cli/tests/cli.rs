use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympvoa"))
        .args(args)
        .env("SYMPVOA_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_lists_four_modules_at_n1() {
    let out = run(&["classify", "--n", "1", "--ell", "2", "--cross-check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["match"], true);
    assert_eq!(v["modules"].as_array().unwrap().len(), 4);
}

#[test]
fn zero_recursion_holds() {
    let out = run(&["zeros", "--n", "3", "--check-recursion"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["recursion"], true);
    assert_eq!(v["matches_explicit"], true);
    let t1: Vec<Value> = v["T1"].as_array().unwrap().clone();
    assert!(t1.contains(&serde_json::json!(["0", "0"])));
}

#[test]
fn perturbed_level_reports_witness() {
    let out = run(&["singular", "--n", "1", "--perturb-level", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("leaves"));
    let v = json(&out);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["zero"] == false));

    let ok = run(&["singular", "--n", "2"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        run(&["fock", "--sector", "int-even", "--modes", "3..1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["weights", "--set", "S1", "--ell", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_deterministic() {
    let a = run(&["classify", "--n", "2", "--ell", "3"]);
    let b = run(&["classify", "--n", "2", "--ell", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn weights_csv_has_level_column() {
    let out = run(&["weights", "--set", "S2", "--n", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L0,L1,L2,level"));
    assert_eq!(lines.count(), 2);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",-1/2")));
}

#[test]
fn candidates_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cands.txt");
    fs::write(&file, "# two candidates\n-1/2,0,0\n-3/2, 0, 1\n").unwrap();
    let report = dir.path().join("out.csv");
    let out = run(&[
        "classify",
        "--n",
        "1",
        "--candidates",
        file.to_str().unwrap(),
        "--format",
        "csv",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("-1/2,0,0,-1/2,maximal-submodule"));
    assert!(text.contains("-3/2,0,1,-1/2,whole-module"));
}

#[test]
fn fock_sign_flip_fails() {
    let ok = run(&[
        "fock",
        "--sector",
        "int-odd",
        "--max-degree",
        "2",
        "--modes",
        "-2..2",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let bad = run(&[
        "fock",
        "--sector",
        "int-odd",
        "--max-degree",
        "2",
        "--modes",
        "-2..2",
        "--sign-flip",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(!json(&bad)["failures"].as_array().unwrap().is_empty());
}

#[test]
fn polynomials_match_closed_forms() {
    let out = run(&["polys", "--n", "1", "--check-closed-form"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in [
        "p1_closed_form_ratio",
        "p2_closed_form_ratio",
        "p3_closed_form_ratio",
    ] {
        assert!(v[key].is_string());
    }
}

#[test]
fn admissibility_of_families() {
    let out = run(&["admissible", "--set", "S1", "--n", "2", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let single = run(&["admissible", "--weight=-1/2,0,0"]);
    assert_eq!(json(&single)["admissible"], true);
    let roots = run(&["roots", "--ell", "3", "--bound", "1"]);
    assert_eq!(json(&roots)["roots"].as_array().unwrap().len(), 18);
}
