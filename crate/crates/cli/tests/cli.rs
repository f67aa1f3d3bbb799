use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

/// Frozen oracle value for q = 0.1 at (y, q, x, p) = (2, 3, 1, 4).
const CYCLIC_FIXTURE: f64 = -1.202_541_112_007_768;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_schottky"));
    c.env_remove("SCHOTTKY_CAPACITY");
    c
}

fn write_config(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn cyclic() -> Value {
    json!({
        "group": { "kind": "cyclic", "q": [0.1, 0.0] },
        "max_len": 40,
        "points": { "y": [2.0, 0.0], "q": [3.0, 0.0], "x": [1.0, 0.0], "p": [4.0, 0.0] }
    })
}

fn four_disk() -> Value {
    json!({
        "group": { "kind": "four_disk", "radius": 0.5 },
        "max_len": 5,
        "points": { "y": [0.1, 0.2], "q": [-0.3, 0.1], "x": [0.3, 0.1], "p": [-0.15, -0.3] }
    })
}

/// Runs a command and returns the exit code with the parsed report.
fn run(args: &[&str], config: &Path, env: &[(&str, &str)]) -> (i32, Value) {
    let out = tempfile::NamedTempFile::new().unwrap();
    let mut cmd = bin();
    cmd.args(args).arg("--config").arg(config).arg("--out").arg(out.path());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let status = cmd.status().unwrap();
    let text = std::fs::read_to_string(out.path()).unwrap();
    let report = if text.is_empty() { Value::Null } else { serde_json::from_str(&text).unwrap() };
    (status.code().unwrap(), report)
}

#[test]
fn validate_cyclic_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cyclic());
    let (code, r) = run(&["validate"], &cfg, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["valid"], json!(true));
    assert_eq!(r["command"], json!("validate"));
    assert!(r["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    for key in ["config", "result", "shells", "verdict", "errors"] {
        assert!(r.get(key).is_some(), "{key}");
    }
}

#[test]
fn words_to_length_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &four_disk());
    let (code, r) = run(&["words", "--max-len", "3"], &cfg, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["count"], json!(53));
    assert_eq!(r["config"]["max_len"], json!(3));
}

#[test]
fn green_matches_the_cyclic_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &cyclic());
    let (code, r) = run(&["green"], &cfg, &[]);
    assert_eq!(code, 0);
    let total = r["result"]["total"].as_f64().unwrap();
    assert!((total - CYCLIC_FIXTURE).abs() < 1e-10);
    assert_eq!(r["shells"].as_array().unwrap().len(), 41);
    assert_eq!(r["shells"][0]["n"], json!(0));
    assert_eq!(r["verdict"], json!("Converging"));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &four_disk());
    let (code, first) = run(&["split", "--max-len", "6"], &cfg, &[]);
    assert_eq!(code, 0);
    assert_eq!(first["config"]["eps"], json!(0.05));
    assert_eq!(first["config"]["capacity"], json!(5_000_000));
    let echoed = write_config(dir.path(), "echo.json", &first["config"]);
    let (code, second) = run(&["split"], &echoed, &[]);
    assert_eq!(code, 0);
    assert_eq!(first["result"], second["result"]);
    assert_eq!(first["shells"], second["shells"]);
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &four_disk());
    let (_, one) = run(&["green", "--threads", "1", "--max-len", "8"], &cfg, &[]);
    let (_, four) = run(&["green", "--threads", "4", "--max-len", "8"], &cfg, &[]);
    assert_eq!(one["result"], four["result"]);
    assert_eq!(one["shells"], four["shells"]);
}

#[test]
fn capacity_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &four_disk());
    let (code, r) = run(&["words"], &cfg, &[("SCHOTTKY_CAPACITY", "100")]);
    assert_eq!(code, 3);
    assert_eq!(r["config"]["capacity"], json!(100));
    assert_eq!(r["errors"][0]["kind"], json!("CapacityExceeded"));
}

#[test]
fn invalid_group_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = four_disk();
    v["group"]["radius"] = json!(1.5);
    let cfg = write_config(dir.path(), "c.json", &v);
    let (code, r) = run(&["validate"], &cfg, &[]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["valid"], json!(false));
    let (code, r) = run(&["green"], &cfg, &[]);
    assert_eq!(code, 2);
    assert_eq!(r["errors"][0]["kind"], json!("InvalidGroup"));
}

#[test]
fn config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = four_disk();
    v["max_lenn"] = json!(3);
    let cfg = write_config(dir.path(), "c.json", &v);
    let out = bin().args(["green", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_lenn"));

    let cfg = write_config(dir.path(), "d.json", &json!({ "group": { "kind": "four_disk", "radius": 0.5 } }));
    let out = bin().args(["green", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points.y"));
}

#[test]
fn numeric_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = four_disk();
    v["points"]["q"] = v["points"]["y"].clone();
    let cfg = write_config(dir.path(), "c.json", &v);
    let (code, r) = run(&["green"], &cfg, &[]);
    assert_eq!(code, 3);
    assert!(!r["errors"].as_array().unwrap().is_empty());
}

#[test]
fn limit_cloud_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &four_disk());
    let csv = dir.path().join("cloud.csv");
    let (code, r) = run(&["limits", "--csv", csv.to_str().unwrap()], &cfg, &[]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,radius,word_length"));
    // 4 + 12 + 36 + 108 disks at depth 4.
    assert_eq!(lines.count(), 160);
    assert_eq!(r["result"]["csv"]["rows"], json!(160));
    assert_eq!(r["result"]["csv"]["excluded_infinite"], json!(0));
}

#[test]
fn deform_scan_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = four_disk();
    v["path"] = json!({ "kind": "RadiusPinch", "t_max": 1.0 });
    v["n_steps"] = json!(5);
    v["max_len"] = json!(4);
    v["delta_len"] = json!(6);
    v["cloud_depth"] = json!(2);
    let cfg = write_config(dir.path(), "c.json", &v);
    let (code, r) = run(&["deform"], &cfg, &[]);
    assert_eq!(code, 0);
    let steps = r["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 5);
    assert_eq!(steps[4]["valid"], json!(false));
    assert_eq!(steps[4]["carried_from"], json!(0.75));
}
