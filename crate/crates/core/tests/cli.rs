mod support;

use std::process::{Command, Output};

use support::scenario_path;

fn pursuit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pursuit"))
        .args(args)
        .output()
        .expect("run the binary")
}

fn path(name: &str) -> String {
    scenario_path(name).to_str().expect("UTF-8 path").to_string()
}

#[test]
fn validate_accepts_shipped_scenarios() {
    for name in [
        "paper_defaults.toml",
        "tunnel.toml",
        "forest.toml",
        "triple_forest.toml",
    ] {
        let out = pursuit(&["validate", &path(name)]);
        assert!(
            out.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn validation_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(scenario_path("paper_defaults.toml")).unwrap();
    std::fs::write(&bad, text.replace("dt_s = 0.1", "dt_seconds = 0.1")).unwrap();
    let out = pursuit(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("line 7") && stderr.contains("dt_seconds"),
        "{stderr}"
    );

    let out = pursuit(&[
        "run",
        bad.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_files_are_internal_errors() {
    let out = pursuit(&["validate", "/nonexistent/scenario.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_without_forest_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = pursuit(&[
        "batch",
        &path("paper_defaults.toml"),
        "--trials",
        "2",
        "--sweep",
        "0,8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_trace_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = pursuit(&[
        "run",
        &path("paper_defaults.toml"),
        "--render",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("outcome: captured"));
    assert!(dir.path().join("trace.csv").is_file());
    assert!(dir.path().join("run.svg").is_file());
}

#[test]
fn output_directory_defaults_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pursuit"))
        .args(["run", &path("paper_defaults.toml")])
        .env("PURSUIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("trace.csv").is_file());
}

#[test]
fn batch_sweep_writes_one_summary_row_per_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = pursuit(&[
        "batch",
        &path("forest.toml"),
        "--trials",
        "3",
        "--sweep",
        "0,8,16",
        "--policy",
        "oa-ecbvc,greedy",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 3 * 2);
    let trials = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 1 + 3 * 2 * 3);
}

#[test]
fn oracle_qp_prints_max_deviation() {
    let out = pursuit(&["oracle-qp", "--fuzz", "50"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("instances: 50") && stdout.contains("max deviation"),
        "{stdout}"
    );
}
