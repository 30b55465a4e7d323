use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mage")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).expect("fixture exists")
}

/// Runs a command with `--json`, drops the timing field and returns the
/// parsed envelope along with its canonical text.
fn envelope(args: &[&str]) -> (Value, String) {
    let out = mage(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("JSON output");
    assert!(v["timing_ms"].is_number());
    v.as_object_mut().unwrap().remove("timing_ms");
    let text = serde_json::to_string_pretty(&v).unwrap();
    (v, text)
}

#[test]
fn is_ma_matches_fixture() {
    let (v, text) = envelope(&["is-ma", "--n", "2", "--expr", "p11*p22 - p12^2 + p11 + 1", "--json"]);
    assert_eq!(text.trim(), fixture("is_ma.json").trim());
    assert_eq!(v["schema"], "mage/1");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["on_shell_proportional"], true);
    assert_eq!(v["payload"]["cofactor"], "0");
}

#[test]
fn bgg_kernel_matches_fixture() {
    let (v, text) = envelope(&["bgg-kernel", "--n", "2", "--r", "1", "--json"]);
    assert_eq!(text.trim(), fixture("bgg_kernel.json").trim());
    assert_eq!(v["payload"]["dimension"], 5);
    assert_eq!(v["payload"]["max_degree"], 2);
}

#[test]
fn classify_matches_fixture() {
    let (v, text) = envelope(&["classify", "--n", "2", "--expr", "p11 - p22", "--json"]);
    assert_eq!(text.trim(), fixture("classify.json").trim());
    assert_eq!(v["payload"]["type"], "hyperbolic");
    assert_eq!(v["payload"]["delta"], "4");
    assert_eq!(v["payload"]["roots"], serde_json::json!(["1", "-1"]));
}

#[test]
fn exit_codes() {
    assert_eq!(mage(&["classify", "--n", "2", "--expr", "p11 - p22"]).status.code(), Some(0));
    assert_eq!(mage(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mage(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(mage(&["classify", "--n", "2"]).status.code(), Some(2));
    assert_eq!(mage(&["classify", "--n", "2", "--expr", "p11 +"]).status.code(), Some(3));
    assert_eq!(mage(&["classify", "--n", "2", "--expr", "p11 + p22", "--point", "p11=0"]).status.code(), Some(0));
    assert_eq!(mage(&["bgg-kernel", "--n", "4", "--r", "1", "--cap", "10"]).status.code(), Some(3));
}

#[test]
fn error_envelope() {
    let out = mage(&["is-ma", "--n", "2", "--expr", "p1 + u", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["payload"]["kind"], "math");
}

#[test]
fn approximations_only_on_request() {
    let (v, _) = envelope(&["classify", "--n", "2", "--expr", "p11 + p12 - p22", "--json"]);
    assert!(v["payload"].get("roots_approx").is_none());
    let (v, _) = envelope(&["classify", "--n", "2", "--expr", "p11 + p12 - p22", "--json", "--approx"]);
    assert_eq!(v["payload"]["roots_approx"].as_array().unwrap().len(), 2);
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["symbol", "--n", "2", "--expr", "p11*p22 - p12^2", "--r", "2", "--json"],
        &["check-system", "--expr", "(p12^2 - 1)/p11", "--json"],
        &["fundamental-forms", "--expr", "p22 - p11^2", "--lambda", "p11", "--json"],
        &["fundamental-forms", "--det-identity", "--json"],
        &["hyperplane-test", "--n", "3", "--expr", "p33 - p11^2", "--json"],
        &["bgg-apply", "--n", "2", "--r", "1", "--expr", "p11^2", "--json"],
        &["pluecker", "--n", "2", "--point", "p11=1, p12=2, p22=3", "--json"],
        &["rank-one-line", "--n", "2", "--point", "p11=1", "--xi", "1,2", "--json"],
        &["sp6-check", "--json"],
        &["phi", "--n", "3", "--expr", "p33 - p11*p22 + p12^2", "--samples", "2", "--json"],
    ];
    for args in cases {
        let (v, _) = envelope(args);
        assert_eq!(v["status"], "ok", "{args:?}");
    }
    let (v, _) = envelope(&["check-system", "--expr", "(p12^2 - 1)/p11", "--json"]);
    assert_eq!(v["payload"]["vanishes"], true);
    let (v, _) = envelope(&["fundamental-forms", "--det-identity", "--json"]);
    assert_eq!(v["payload"]["holds"], true);
    let (v, _) = envelope(&["pluecker", "--n", "2", "--point", "p11=1, p12=2, p22=3", "--json"]);
    assert_eq!(v["payload"]["quadric"], "0");
    let (v, _) = envelope(&["sp6-check", "--json"]);
    assert_eq!(v["payload"]["rank"], 21);
    assert_eq!(v["payload"]["all_conformal"], true);
}
