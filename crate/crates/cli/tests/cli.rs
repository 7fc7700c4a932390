use std::path::Path;
use std::process::{Command, Output};

fn lsjulia(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsjulia"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

const SMALL: &str = "--grid=-2,-2,0.04,100,100";

#[test]
fn green_writes_field_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = lsjulia(&["green", SMALL, "--points=50"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = json(&dir.path().join("manifest.json"));
    assert_eq!(m["command"], "green");
    assert_eq!(
        m["outputs"],
        serde_json::json!(["field.csv", "field.pgm", "invariance.json"])
    );
    assert!(m["config"].get("workers").is_none());
    assert_eq!(json(&dir.path().join("invariance.json"))["pass"], true);
    let csv = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 100 * 100);
}

#[test]
fn bad_polynomial_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = lsjulia(&["green", SMALL, "--poly=1,x"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lsjulia(&["green", "--nope"], dir.path()).status.code(), Some(2));
}

#[test]
fn exhausted_relaxation_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = lsjulia(
        &["relation", "--grid=-2.2,-2.2,0.04,110,110", "--max-sweeps=2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unwritable_output_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = lsjulia(&["green", SMALL, "--points=5"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_fills_unset_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 11\n[green]\npoints = 7\ngrid = \"-1,-1,0.1,20,20\"\n").unwrap();
    let out = lsjulia(
        &["green", "--config", cfg.to_str().unwrap(), "--seed=3"],
        &dir.path().join("o"),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = json(&dir.path().join("o/manifest.json"));
    assert_eq!(m["config"]["points"], 7);
    assert_eq!(m["config"]["common"]["seed"], 3);
    assert_eq!(m["config"]["common"]["grid"], "-1,-1,0.1,20,20");
}

#[test]
fn missing_config_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = lsjulia(&["green", "--config=/nonexistent/run.toml"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}
