use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pmqkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmqkit")).args(args).output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let path = std::env::temp_dir().join(format!("pmqkit-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn builtin_documents_validate() {
    let doc = pmqkit(&["builtins", "trivial-S3-transpositions"]);
    assert!(doc.status.success());
    let path = scratch("builtin.json", &doc.stdout);
    let out = pmqkit(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out.stdout);
    assert_eq!(report["command"], "validate");
    assert_eq!(report["results"]["valid"], true);
    assert_eq!(report["results"]["pair"]["group_order"], 6);
    assert_eq!(report["input_digest"].as_str().unwrap().len(), 64);
    assert!(report.get("elapsed_ms").is_none());
}

#[test]
fn truncated_input_is_malformed() {
    let doc = pmqkit(&["builtins", "geodesic-S3"]).stdout;
    let path = scratch("truncated.json", &doc[..doc.len() / 2]);
    let out = pmqkit(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out.stderr)["error"]["kind"], "malformed-input");
}

#[test]
fn axiom_violation_exits_with_validation_code() {
    let mut doc = json(&pmqkit(&["builtins", "complete-Z3"]).stdout);
    doc.as_object_mut().unwrap().remove("pair");
    doc["prod"][2][1] = Value::Null;
    let path = scratch("violation.json", doc.to_string().as_bytes());
    let out = pmqkit(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out.stdout);
    assert_eq!(report["results"]["valid"], false);
    assert!(!report["results"]["pmq_violations"].as_array().unwrap().is_empty());
}

#[test]
fn exhausted_budget_exits_with_budget_code() {
    let out = pmqkit(&["--budget", "10", "completion", "--input", "builtin:trivial-S3-transpositions", "--norm", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out.stderr)["error"]["kind"], "budget");
}

#[test]
fn usage_errors_exit_with_malformed_code() {
    assert_eq!(pmqkit(&["completion", "--input", "builtin:unit"]).status.code(), Some(4));
    assert_eq!(pmqkit(&["validate", "--input", "/nonexistent/pmq.json"]).status.code(), Some(4));
    assert_eq!(pmqkit(&["classes", "--input", "builtin:no-such"]).status.code(), Some(4));
}

#[test]
fn hurwitz_and_completion_counts_agree() {
    for n in 1..=4 {
        let n = n.to_string();
        let orbits = json(&pmqkit(&["hurwitz", "--group", "builtin:S3", "--class", "class:1", "--length", &n]).stdout);
        let classes = json(&pmqkit(&["completion", "--input", "builtin:trivial-S3-transpositions", "--norm", &n]).stdout);
        assert_eq!(
            orbits["results"]["orbits"].as_array().unwrap().len(),
            classes["results"]["classes"].as_array().unwrap().len()
        );
    }
}

#[test]
fn betti_and_aq_reports() {
    let betti = json(&pmqkit(&["betti", "--group", "builtin:S3", "--class", "nonidentity", "--max-deg", "4"]).stdout);
    assert_eq!(betti["results"]["betti"], serde_json::json!([1, 2, 1, 0, 0]));
    let aq = json(&pmqkit(&["aq", "--input", "builtin:geodesic-S3"]).stdout);
    assert_eq!(aq["results"]["hilbert"], serde_json::json!([1, 0, 1, 0, 1]));
}

#[test]
fn crosscheck_reports_failures_with_exit_code() {
    let ok = pmqkit(&["crosscheck", "--input", "builtin:complete-S3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok.stdout)["results"]["failed"], 0);
    let split = pmqkit(&["crosscheck", "--input", "builtin:trivial-S3-nonidentity"]);
    assert_eq!(split.status.code(), Some(2));
    assert_eq!(json(&split.stdout)["results"]["failed"], 1);
}

#[test]
fn timing_is_opt_in() {
    let out = pmqkit(&["--timing", "classes", "--input", "builtin:unit"]);
    assert!(json(&out.stdout)["elapsed_ms"].is_u64());
}
