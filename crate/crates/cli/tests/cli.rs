use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tsbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsbench"))
        .args(args)
        .env_remove("TSBENCH_API_URL")
        .env_remove("TSBENCH_MODEL")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tsbench(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_json(args: &[&str]) -> Value {
    let out = tsbench(args);
    assert!(!out.status.success(), "{args:?} should fail");
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("stderr not JSON ({e}): {}", String::from_utf8_lossy(&out.stderr)))
}

fn generate(dir: &Path, kind: &str, seed: &str) -> String {
    let path = dir.join(format!("{kind}.jsonl"));
    let p = path.to_str().unwrap();
    ok(&["generate", "--kind", kind, "--seed", seed, "--out", p, "--train", "4", "--validation", "2", "--test", "24"]);
    p.to_string()
}

#[test]
fn generate_writes_dataset_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "trend", "9");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("trend.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["counts"]["test"], 24);
    assert_eq!(manifest["base_seed"], 9);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 30);

    // same seed, same bytes
    let other = tempfile::tempdir().unwrap();
    let again = generate(other.path(), "trend", "9");
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(again).unwrap());
}

#[test]
fn render_prints_the_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(dir.path(), "seasonality", "1");
    let md = ok(&["render", "--in", &path, "--format", "markdown"]);
    assert!(md.starts_with("|Date|Value|\n|---|---|\n"), "{md}");
    let sym = ok(&["render", "--in", &path, "--format", "symbol", "--id", "seasonality-test-00003"]);
    assert!(sym.starts_with("Date,Value,DirectionIndicator\n"), "{sym}");
    let err = error_json(&["render", "--in", &path, "--id", "nope"]);
    assert!(err["error"].as_str().unwrap().contains("nope"));
}

#[test]
fn run_score_and_bias_report() {
    let dir = tempfile::tempdir().unwrap();
    let trend = generate(dir.path(), "trend", "2");
    let results = dir.path().join("r.jsonl");
    let report = dir.path().join("report.json");
    ok(&[
        "run", "--solver", "oracle", "--tasks", &trend, "--format", "tsv", "--style", "cot",
        "--kinds", "detection,classification,retrieval-bundle,search", "--stratify",
        "--out", results.to_str().unwrap(),
    ]);
    let lines = std::fs::read_to_string(&results).unwrap();
    assert!(lines.lines().count() >= 24 * 3);

    let text = ok(&["score", "--in", results.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert!(text.contains("retrieval_bundle"));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for g in json["groups"].as_array().unwrap() {
        assert_eq!(g["accuracy"], 1.0, "{g}");
    }

    let bias: Value = serde_json::from_str(&ok(&["bias-report", "--in", results.to_str().unwrap()])).unwrap();
    assert_eq!(bias["bias_flag"], false);
    assert!(!bias["position"].as_array().unwrap().is_empty());
}

#[test]
fn length_filter_limits_samples() {
    let dir = tempfile::tempdir().unwrap();
    let trend = generate(dir.path(), "trend", "4");
    let out = ok(&["run", "--solver", "random", "--tasks", &trend, "--kinds", "search", "--min-len", "90", "--max-len", "150"]);
    for line in out.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert!(r["series_len"].as_u64().unwrap() >= 90);
    }
    let err = error_json(&["run", "--solver", "random", "--tasks", &trend, "--min-len", "149", "--max-len", "149"]);
    assert!(err["error"].as_str().unwrap().contains("no test samples"));
}

#[test]
fn failures_exit_nonzero_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let trend = generate(dir.path(), "trend", "5");
    let err = error_json(&["run", "--solver", "http", "--tasks", &trend]);
    assert!(err["error"].as_str().unwrap().contains("endpoint"));

    let missing = dir.path().join("missing.jsonl");
    let err = error_json(&["score", "--in", missing.to_str().unwrap()]);
    assert!(err["error"].as_str().unwrap().contains("missing.jsonl"));

    std::fs::write(&trend, "{}\n").unwrap();
    let err = error_json(&["render", "--in", &trend]);
    assert!(err["causes"].as_array().unwrap().len() >= 2);
}
