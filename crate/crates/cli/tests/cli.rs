mod common;
#[path = "../../core/tests/support/mock_server.rs"]
#[allow(dead_code)]
mod mock_server;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use shacl_explain::kg::ViolationKg;
use shacl_explain_cli::benchmark::CSV_HEADER;
use shacl_explain_cli::REPORT_SCHEMA;

use common::fixture;
use mock_server::{completion, MockServer};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_shacl-explain"));
    cmd.env_remove("OPENAI_API_KEY");
    cmd
}

fn validate(data: &str, shapes: &str, kg: &Path, extra: &[&str]) -> Output {
    bin()
        .arg("validate")
        .arg("--data")
        .arg(fixture(data))
        .arg("--shapes")
        .arg(fixture(shapes))
        .arg("--kg")
        .arg(kg)
        .args(extra)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad report ({e}): {}", String::from_utf8_lossy(&out.stderr)))
}

fn assert_schema_valid(report: &Value) {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(report)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "schema errors: {errors:#?}");
}

#[test]
fn conforming_data_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = validate(
        "conforming/data.ttl",
        "people/shapes.ttl",
        &dir.path().join("kg.ttl"),
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["conforms"], true);
    assert_eq!(r["violations"], Value::Array(vec![]));
    assert_schema_valid(&r);
}

#[test]
fn repeat_run_is_served_from_the_kg() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.ttl");
    let first = validate("four/data.ttl", "people/shapes.ttl", &kg, &[]);
    assert_eq!(first.status.code(), Some(1));
    let r = report(&first);
    assert_schema_valid(&r);
    assert_eq!(r["conforms"], false);
    assert_eq!(r["stats"]["violation_count"], 4);
    assert_eq!(r["stats"]["unique_signatures"], 2);
    assert_eq!(r["stats"]["backend_calls"], 2);
    let violations = r["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .all(|v| v["explanations"].as_array().unwrap().len() == 1));
    let records = ViolationKg::load(&kg).unwrap().record_count();
    assert_eq!(records, 2);

    let second = validate("four/data.ttl", "people/shapes.ttl", &kg, &[]);
    let r = report(&second);
    assert_eq!(r["stats"]["backend_calls"], 0);
    assert_eq!(r["stats"]["kg_hit_rate"], 1.0);
    for v in r["violations"].as_array().unwrap() {
        assert_eq!(v["explanations"][0]["cache_hit"], true);
    }
    assert_eq!(ViolationKg::load(&kg).unwrap().record_count(), records);
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = validate(
        "four/data.ttl",
        "people/shapes.ttl",
        &dir.path().join("kg.ttl"),
        &[
            "--output",
            path.to_str().unwrap(),
            "--language",
            "en",
            "--language",
            "de",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_schema_valid(&r);
    assert_eq!(r["stats"]["backend_calls"], 4);
    let langs: Vec<&str> = r["violations"][0]["explanations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["language"].as_str().unwrap())
        .collect();
    assert_eq!(langs, ["en", "de"]);
    assert!(r["warnings"][0].as_str().unwrap().contains("\"de\""));
}

#[test]
fn no_explain_leaves_the_kg_alone() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.ttl");
    let out = validate("four/data.ttl", "people/shapes.ttl", &kg, &["--no-explain"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_schema_valid(&r);
    assert_eq!(r["stats"]["kg_lookups"], 0);
    assert_eq!(r["stats"]["timings"]["explain_ms"], 0.0);
    assert!(!kg.exists());
}

#[test]
fn parse_and_shape_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.ttl");
    for (data, shapes) in [
        ("bad/syntax.ttl", "people/shapes.ttl"),
        ("four/data.ttl", "bad/syntax.ttl"),
        ("four/data.ttl", "bad/shapes.ttl"),
        ("missing.ttl", "people/shapes.ttl"),
    ] {
        let out = validate(data, shapes, &kg, &[]);
        assert_eq!(out.status.code(), Some(2), "{data} / {shapes}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    }
}

#[test]
fn missing_endpoint_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = validate(
        "four/data.ttl",
        "people/shapes.ttl",
        &dir.path().join("kg.ttl"),
        &["--generator", "http"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generation_failure_exits_three_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.ttl");
    // Two calls succeed (first signature), then the key is rejected.
    let server = MockServer::start(vec![
        (200, completion("Missing name.")),
        (200, completion("1. Add a name.")),
        (401, "{}".into()),
    ]);
    let out = bin()
        .env("MOCK_KEY", "secret")
        .args([
            "validate",
            "--generator",
            "http",
            "--model",
            "mock",
            "--api-key-env",
            "MOCK_KEY",
        ])
        .args(["--endpoint", &server.url, "--retry-backoff-secs", "0"])
        .arg("--data")
        .arg(fixture("four/data.ttl"))
        .arg("--shapes")
        .arg(fixture("people/shapes.ttl"))
        .arg("--kg")
        .arg(&kg)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_schema_valid(&r);
    let explained: Vec<usize> = r["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["explanations"].as_array().unwrap().len())
        .collect();
    // ex:ann is generated, ex:ben hits the KG, ex:cat fails and ex:dan is skipped.
    assert_eq!(explained, [1, 1, 0, 0]);
    assert!(r["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w.as_str().unwrap().contains("stopped")));
    assert_eq!(ViolationKg::load(&kg).unwrap().record_count(), 1);
    assert_eq!(
        server.requests()[0].authorization.as_deref(),
        Some("Bearer secret")
    );
}

fn benchmark(extra: &[&str]) -> (Output, Vec<Vec<String>>) {
    let out = bin()
        .arg("benchmark")
        .arg("--data")
        .arg(fixture("four/data.ttl"))
        .arg("--shapes")
        .arg(fixture("people/shapes.ttl"))
        .args(extra)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (out, rows)
}

#[test]
fn benchmark_emits_one_row_per_run() {
    let (out, rows) = benchmark(&["--runs", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows.len(), 3);
    let calls: Vec<usize> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(calls, [2, 0, 0]);
    assert!(rows.iter().all(|r| r.len() == 7));
}

#[test]
fn benchmark_baseline_has_no_explain_time() {
    let (_, rows) = benchmark(&["--runs", "2", "--no-explain"]);
    assert!(rows.iter().all(|r| r[3] == "0.000" && r[4] == "0"));
}

#[test]
fn benchmark_with_prewarmed_kg() {
    let dir = tempfile::tempdir().unwrap();
    let kg = dir.path().join("kg.ttl");
    validate("four/data.ttl", "people/shapes.ttl", &kg, &[]);
    let kg_arg = kg.to_str().unwrap();
    let (_, rows) = benchmark(&["--runs", "2", "--kg", kg_arg, "--keep-kg"]);
    assert_eq!(rows[0][4], "0");
    let (_, rows) = benchmark(&["--runs", "1", "--kg", kg_arg]);
    assert_eq!(rows[0][4], "2");
}
