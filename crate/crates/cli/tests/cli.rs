//! End-to-end behaviour of the `bscount` binary: exit codes, config handling,
//! output locations and the replay flow.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bscount")
}

#[test]
fn constants_subcommand_exits_zero_and_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["constants", "--out"])
        .arg(dir.path())
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(dir.path().join("constants-table.txt")).unwrap();
    assert!(table.contains("5.0000000000e-1"), "C(1,1) row missing:\n{table}");
    assert!(dir.path().join("records.jsonl").exists());
}

#[test]
fn out_dir_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin())
        .args(["verify-jordan", "--trials", "2"])
        .env("BSCOUNT_OUT", dir.path())
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("records.jsonl").exists());
}

#[test]
fn config_kind_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"kind": "jordan", "seed": 1, "trials": 2}"#,
    )
    .unwrap();
    let output = Command::new(bin())
        .args(["verify-abstract", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("does not match"), "stderr: {stderr}");
}

#[test]
fn replay_reproduces_archived_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("fixture.json");
    std::fs::write(
        &fixture,
        r#"{
            "check": "jordan_split",
            "structure": [[0.0, 0.0, 3], [1.0, 0.5, 2]],
            "delta": 1e-4,
            "tolerance": 1e-8,
            "archived_pass": true,
            "archived_error": 1e-12
        }"#,
    )
    .unwrap();
    let output = Command::new(bin())
        .args(["replay"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("verdict reproduced"), "stdout: {stdout}");
}

#[test]
fn replay_flags_tampered_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("fixture.json");
    // archived as failing, but the split matches: replay must not reproduce
    std::fs::write(
        &fixture,
        r#"{
            "check": "jordan_split",
            "structure": [[0.0, 0.0, 2]],
            "delta": 1e-4,
            "tolerance": 1e-8,
            "archived_pass": false,
            "archived_error": 1.0
        }"#,
    )
    .unwrap();
    let output = Command::new(bin())
        .args(["replay"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("NOT reproduced"), "stdout: {stdout}");
}

#[test]
fn schrodinger_accepts_explicit_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
            "kind": "schrodinger",
            "cases": [{
                "name": "cli-check",
                "d": 1, "half_width": 4.0, "n": 48,
                "potential": {"kind": "scaled_char", "value": [-1.0, 0.5], "radius": 1.0},
                "levels": 2,
                "alphas": [0.0], "eps_list": [0.3], "gammas": [0.5],
                "kappas": [1.0], "weights": [{"kind": "reciprocal"}]
            }],
            "allowance": 0.05,
            "seed": 5, "trials": 1
        }"#,
    )
    .unwrap();
    let status = Command::new(bin())
        .args(["schrodinger", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path())
        .stdout(std::process::Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(dir.path().join("cli-check-eigenvalues.csv")).unwrap();
    assert!(csv.starts_with("re,im,alg_mult,certificate"));
}
