use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ilmsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilmsa")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_env(dir: &Path, start: [f64; 3], obstacles: &str) -> std::path::PathBuf {
    let path = dir.join("env.json");
    let text = format!(
        r#"{{"version": 1, "units": "mm",
            "bounds": {{"min": [0, 0, 0], "max": [500, 300, 500]}},
            "start": {start:?}, "end": [465, 145, 330],
            "obstacles": [{obstacles}], "targets": []}}"#
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn obstacle_free_plan_has_two_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let env = write_env(dir.path(), [40.0, 120.0, 280.0], "");
    let out = dir.path().join("path.json");
    let res = ilmsa(&["plan", "--env", s(&env), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 2);
}

#[test]
fn blocked_start_exits_with_obstacle_id() {
    let dir = tempfile::tempdir().unwrap();
    let env = write_env(
        dir.path(),
        [40.0, 120.0, 280.0],
        r#"{"id": "f07", "min": [20, 100, 260], "max": [60, 140, 500], "stem_extended": true}"#,
    );
    let out = dir.path().join("path.json");
    let res = ilmsa(&["plan", "--env", s(&env), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("f07"));
    assert!(!out.exists());
}

#[test]
fn bench_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.json");
    std::fs::write(
        &suite,
        r#"{"scenarios": [{"id": "a", "generate": {"seed": 1, "fruits": 5, "bounds": [0, 500, 0, 300, 0, 500],
            "start": [40, 120, 280], "end": [465, 145, 330], "fruit_size": [40, 40, 40], "margin": 5}}]}"#,
    )
    .unwrap();
    let csv = dir.path().join("results.csv");
    let res = ilmsa(&["bench", "--suite", s(&suite), "--algos", "ilmsa3d,rrt3d", "--trials", "4", "--out", s(&csv)]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 2 * 4);

    let res = ilmsa(&["stats", "--results", s(&csv), "--metric", "length", "--groups", "ilmsa3d,rrt3d"]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let doc: Value = serde_json::from_slice(&res.stdout).unwrap();
    let p = doc["p_value"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(doc["n_per_group"], serde_json::json!([4, 4]));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(ilmsa(&["plan", "--bogus"]).status.code(), Some(2));
}

#[test]
fn bad_config_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let env = write_env(dir.path(), [40.0, 120.0, 280.0], "");
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{"sweep": {"delta_theta": 5, "bogus": 1}}"#).unwrap();
    let out = dir.path().join("path.json");
    let res = ilmsa(&["plan", "--env", s(&env), "--config", s(&config), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("sweep"));
    assert!(!out.exists());
}

#[test]
fn missing_environment_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("path.json");
    let res = ilmsa(&["plan", "--env", s(&dir.path().join("nope.json")), "--out", s(&out)]);
    assert_eq!(res.status.code(), Some(4));
}
