//! End-to-end runs of the `densecsp` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn densecsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densecsp"))
        .args(args)
        .env_remove("DENSECSP_CAP")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = densecsp(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn write_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, ok(args)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_satisfiable_meets_floor() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["0", "1", "2"] {
        let inst = write_to(
            dir.path(),
            &format!("p{seed}.json"),
            &["--seed", seed, "generate", "planted", "--n", "5", "--q", "2", "--k", "2"],
        );
        let report: Value = serde_json::from_str(&ok(&["solve", "--input", &inst, "--i", "4"])).unwrap();
        assert_eq!(report["schema_version"], 1);
        let v = report["result"]["value_f64"].as_f64().unwrap();
        assert!(v >= 2f64.powf(-0.25) - 1e-12, "seed {seed}: {v}");
    }
}

#[test]
fn solve_with_oracle_reports_gap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_to(dir.path(), "x.json", &["--seed", "3", "generate", "3xor", "--n", "6", "--d", "2"]);
    let report: Value = serde_json::from_str(&ok(&["solve", "--input", &inst, "--oracle"])).unwrap();
    let r = &report["result"];
    assert!(r["optimum"].is_string());
    let gap = r["gap"].as_f64().unwrap();
    assert!(gap >= -1e-12);
    let opt = densecsp::rational::parse_rational(r["optimum"].as_str().unwrap()).unwrap();
    let val = densecsp::rational::parse_rational(r["value"].as_str().unwrap()).unwrap();
    assert!(val <= opt);
}

#[test]
fn malformed_input_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3, \"q\": ").unwrap();
    let report = dir.path().join("report.json");
    let out = densecsp(&[
        "--output",
        report.to_str().unwrap(),
        "solve",
        "--input",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!report.exists());
}

#[test]
fn birthday_question_counts() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_to(dir.path(), "g.json", &["generate", "odd-cycle"]);
    let b: Value = serde_json::from_str(&ok(&["generate", "birthday", "--input", &g, "--k", "2", "--l", "2"])).unwrap();
    assert_eq!(b["x_count"], 3);
    assert_eq!(b["y_count"], 3);
    let c = write_to(dir.path(), "c.json", &["generate", "chsh"]);
    let b: Value = serde_json::from_str(&ok(&["generate", "birthday", "--input", &c, "--k", "1", "--l", "2"])).unwrap();
    assert_eq!(b["x_count"], 2);
    assert_eq!(b["y_count"], 1);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let runs = [
        vec!["--seed", "9", "generate", "dense", "--n", "4", "--q", "3", "--k", "2"],
        vec!["--seed", "4", "experiment", "funcbound-sweep", "--trials", "50"],
        vec!["--seed", "5", "experiment", "edge-tail", "--trials", "500"],
    ];
    for args in &runs {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).expect("column present");
    r.records().map(|rec| rec.unwrap()[idx].to_string()).collect()
}

#[test]
fn funcbound_sweep_slack_is_nonnegative() {
    let out = ok(&["--format", "csv", "experiment", "funcbound-sweep", "--trials", "2000"]);
    let slack = csv_column(&out, "slack");
    assert_eq!(slack.len(), 2000);
    let min = slack.iter().map(|s| s.parse::<f64>().unwrap()).fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-9, "{min}");
}

#[test]
fn edge_tail_on_complete_graph_is_zero() {
    let out = ok(&[
        "--format", "csv", "experiment", "edge-tail", "--graph", "complete:4:4", "--k", "2", "--l", "3", "--gamma",
        "0.1", "--trials", "2000",
    ]);
    let outside = csv_column(&out, "outside");
    assert!(!outside.is_empty());
    assert!(outside.iter().all(|v| v == "0"));
}

#[test]
fn birthday_decay_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_to(dir.path(), "g.json", &["generate", "odd-cycle"]);
    let out = ok(&["--format", "csv", "experiment", "birthday-decay", "--input", &g]);
    let values = csv_column(&out, "value");
    assert_eq!(values, ["8/9", "7/9", "2/3", "7/9", "5/9", "1/3", "2/3", "1/3", "0"]);
}

#[test]
fn cap_from_environment_is_a_guard() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_to(dir.path(), "x.json", &["generate", "3xor", "--n", "8", "--d", "2"]);
    let out = Command::new(env!("CARGO_BIN_EXE_densecsp"))
        .args(["solve", "--input", &inst, "--oracle"])
        .env("DENSECSP_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn metrics_reports_density() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_to(dir.path(), "d.json", &["generate", "dense", "--n", "4", "--q", "2", "--k", "2"]);
    let m: Value = serde_json::from_str(&ok(&["metrics", "--input", &inst])).unwrap();
    assert_eq!(m["command"], "metrics");
    assert!(m["result"].is_object());
}
