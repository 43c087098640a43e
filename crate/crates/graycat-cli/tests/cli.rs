//! End-to-end checks of the binary: exit-code contract, JSON round trips,
//! and byte-deterministic output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn graycat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graycat"))
        .args(args)
        .env_remove("GRAYCAT_FORMAT")
        .env_remove("GRAYCAT_BUDGET")
        .env_remove("GRAYCAT_CAP")
        .env_remove("GRAYCAT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("graycat-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn tensor_of_intervals_emits_the_expected_complex() {
    let output = graycat(&["tensor", "interval", "interval"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let basis = doc["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 9);
    let degree2 = basis.iter().filter(|b| b["degree"] == 2).count();
    assert_eq!(degree2, 1);
}

#[test]
fn emitted_complex_json_reparses_to_an_equal_value() {
    let output = graycat(&["tensor", "interval", "interval"]);
    let text = stdout(&output);
    let path = temp_file("tensor.json", &text);
    let again = graycat(&["validate", path.to_str().unwrap()]);
    assert!(again.status.success(), "{}", String::from_utf8_lossy(&again.stderr));
    let echoed = graycat(&["tensor", "interval", "interval"]);
    assert_eq!(text, stdout(&echoed), "output is not byte-deterministic");
    std::fs::remove_file(path).ok();
}

#[test]
fn exit_codes_follow_the_contract() {
    // Pass.
    assert_eq!(graycat(&["p-s-verify", "--complex", "globe2", "--n", "2"]).status.code(), Some(0));
    // Verification failure: a complex with ∂∂ ≠ 0.
    let bad = r#"{
        "basis": [
            {"id": "v0", "degree": 0}, {"id": "v1", "degree": 0},
            {"id": "e1", "degree": 1}, {"id": "e2", "degree": 2}
        ],
        "differential": {
            "e1": [{"id": "v1", "coeff": 1}, {"id": "v0", "coeff": -1}],
            "e2": [{"id": "e1", "coeff": 1}]
        },
        "augmentation": {"v0": 1, "v1": 1}
    }"#;
    let path = temp_file("bad.json", bad);
    let output = graycat(&["validate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["violations"].as_array().unwrap().len(), 1);
    std::fs::remove_file(path).ok();
    // Parse error.
    let path = temp_file("broken.json", "{ not json");
    assert_eq!(graycat(&["validate", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(path).ok();
    // Usage error.
    assert_eq!(graycat(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn functor_roundtrip_through_files() {
    let output = graycat(&["functors", "arrow", "arrow"]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["count"], 3);
    let functor = serde_json::to_string(&doc["functors"][0]).unwrap();
    let path = temp_file("functor.json", &functor);
    let ff = graycat(&[
        "ffsurj",
        "arrow",
        "arrow",
        "--functor",
        path.to_str().unwrap(),
        "--n",
        "1",
    ]);
    assert!(ff.status.success(), "{}", String::from_utf8_lossy(&ff.stderr));
    let fac = graycat(&[
        "factorize",
        "arrow",
        "arrow",
        "--functor",
        path.to_str().unwrap(),
        "--n",
        "0",
    ]);
    assert!(fac.status.success(), "{}", String::from_utf8_lossy(&fac.stderr));
    std::fs::remove_file(path).ok();
}

#[test]
fn sq2_roundtrips_and_fibration_check_passes() {
    let output = graycat(&["sq2", "walking2cell"]);
    assert!(output.status.success());
    let path = temp_file("sq2.json", &stdout(&output));
    let check = graycat(&[
        "fibration-check",
        path.to_str().unwrap(),
        "--companion-marking",
    ]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));
    let companions = graycat(&["companions", path.to_str().unwrap()]);
    assert!(companions.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&companions)).unwrap();
    assert_eq!(doc["accompanied"], true);
    std::fs::remove_file(path).ok();
}

#[test]
fn dot_output_is_deterministic() {
    let first = graycat(&["--format", "dot", "tensor", "interval", "interval"]);
    let second = graycat(&["--format", "dot", "tensor", "interval", "interval"]);
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).starts_with("digraph precedence"));
    let grid = graycat(&["--format", "dot", "sq2", "arrow"]);
    assert!(grid.status.success());
    assert!(stdout(&grid).starts_with("digraph double"));
}

#[test]
fn acceptance_single_criterion_runs() {
    let output = graycat(&["--format", "text", "acceptance", "--only", "2"]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(stdout(&output).contains("[PASS] criterion  2"));
}

#[test]
fn dualize_is_involutive_through_the_cli() {
    let once = graycat(&["dualize", "globe2", "--dims", "1,2"]);
    assert!(once.status.success());
    let path = temp_file("dual.json", &stdout(&once));
    let twice = graycat(&["dualize", path.to_str().unwrap(), "--dims", "1,2"]);
    assert!(twice.status.success());
    // No dims at all leaves the complex unchanged.
    let original = graycat(&["dualize", "globe2"]);
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&stdout(&twice)).unwrap(),
        serde_json::from_str::<serde_json::Value>(&stdout(&original)).unwrap()
    );
    std::fs::remove_file(path).ok();
}

#[test]
fn sqpair_over_a_file_filtration() {
    // a0 = discrete two objects included into the walking arrow.
    let a0 = r#"{
        "max_dim": 1,
        "cells": [["x", "y"], ["idx", "idy"]],
        "src": [{"idx": "x", "idy": "y"}],
        "tgt": [{"idx": "x", "idy": "y"}],
        "identities": [{"x": "idx", "y": "idy"}],
        "compositions": [
            {"i": 0, "dim": 1, "lhs": "idx", "rhs": "idx", "eq": "idx"},
            {"i": 0, "dim": 1, "lhs": "idy", "rhs": "idy", "eq": "idy"}
        ]
    }"#;
    let map = r#"{"maps": [{"x": "0", "y": "1"}, {"idx": "0->0", "idy": "1->1"}]}"#;
    let a0_path = temp_file("a0.json", a0);
    let map_path = temp_file("map.json", map);
    let output = graycat(&[
        "sqpair",
        "--a0",
        a0_path.to_str().unwrap(),
        "--a1",
        "arrow",
        "--map",
        map_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["vcells"].as_array().unwrap().len(), 2);
    std::fs::remove_file(a0_path).ok();
    std::fs::remove_file(map_path).ok();
}
