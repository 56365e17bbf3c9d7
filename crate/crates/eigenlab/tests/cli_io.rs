//! End-to-end checks of the binary: exit codes, deterministic reports,
//! and the list/report file formats.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eigenlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn tensor_writes_the_worked_example_list() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "0.75\n0.25\n");
    let b = write(dir.path(), "b.csv", "0.6\n0.2\n0.2\n");
    let out = dir.path().join("product.csv");
    let output = run(&[
        "tensor",
        "--list-a",
        &a,
        "--list-b",
        &b,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let values: Vec<f64> = text.lines().map(|l| l.trim().parse().unwrap()).collect();
    let want = [0.45, 0.15, 0.15, 0.15, 0.05, 0.05];
    assert_eq!(values.len(), want.len());
    for (got, want) in values.iter().zip(want) {
        assert!((got - want).abs() < 1e-14);
    }
}

#[test]
fn tensor_prefix_mode_appends_tail_bound() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "0.9\n0.1\n");
    let b = write(dir.path(), "b.csv", "0.8\n0.2\n");
    let output = run(&["tensor", "--list-a", &a, "--list-b", &b, "--k", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("# tail_mass_bound"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn tensor_json_format_produces_the_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "1.0\n");
    let b = write(dir.path(), "b.csv", "0.5\n0.5\n");
    let output = run(&["tensor", "--list-a", &a, "--list-b", &b, "--format", "json"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "tensor");
    assert_eq!(report["results"]["list"], serde_json::json!([0.5, 0.5]));
}

#[test]
fn malformed_list_exits_2_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "bad.csv", "0.25\n0.75\n");
    let b = write(dir.path(), "b.csv", "1.0\n");
    let out = dir.path().join("never.csv");
    let output = run(&[
        "tensor",
        "--list-a",
        &a,
        "--list-b",
        &b,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("bad.csv:2"), "stderr was: {stderr}");
    assert!(!out.exists(), "exit 2 must not leave partial output");
}

#[test]
fn missing_input_file_exits_2() {
    let output = run(&[
        "tensor",
        "--list-a",
        "/nonexistent/a.csv",
        "--list-b",
        "/nonexistent/b.csv",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let output = run(&["verify", "--suite", "mystery"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("unknown suite"));
}

#[test]
fn verify_unknown_tolerance_exits_2() {
    let output = run(&[
        "verify", "--suite", "weyl", "--trials", "2", "--tol", "bogus=1",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_reports_are_byte_identical_for_identical_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let output = run(&[
            "verify",
            "--suite",
            "lemma48",
            "--trials",
            "25",
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn verify_seed_changes_the_report() {
    let first = run(&["verify", "--suite", "weyl", "--trials", "5", "--seed", "1"]);
    let second = run(&["verify", "--suite", "weyl", "--trials", "5", "--seed", "2"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    assert_ne!(first.stdout, second.stdout);
}

#[test]
fn verify_failure_exits_1_but_still_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("failed.json");
    // An impossible final tolerance forces a clean assertion failure.
    let output = run(&[
        "verify",
        "--suite",
        "semigroup",
        "--trials",
        "2",
        "--tol",
        "absorb_final=0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["results"]["pass"], false);
    assert_eq!(report["config"]["tol"]["absorb_final"], 0.0);
}

#[test]
fn verify_all_suites_pass_at_small_trial_counts() {
    for suite in [
        "weyl",
        "lemma43",
        "lemma46",
        "lemma48",
        "semigroup",
        "theoremb",
    ] {
        let output = run(&["verify", "--suite", suite, "--trials", "5", "--seed", "7"]);
        assert_eq!(
            output.status.code(),
            Some(0),
            "suite {suite} stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
        assert_eq!(report["schema"], 1);
        assert_eq!(report["results"]["pass"], true, "suite {suite}");
    }
}

#[test]
fn interaction_uniform_pair_reports_closed_form() {
    let output = run(&["interaction", "--p", "1", "--q", "2", "--n-max", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["command"], "interaction");
    assert_eq!(report["results"]["bound"]["rhs"], 1.5);
    assert_eq!(report["results"]["crosscheck"]["matches"], true);
    assert_eq!(report["results"]["bound"]["verdict"], "holds");
    let rows = report["results"]["bound"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["lhs"], 1.5);
    assert_eq!(rows[1]["lhs"], 1.875);
}

#[test]
fn interaction_list_mode_and_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let minus = write(dir.path(), "minus.csv", "0.75\n0.25\n");
    let plus = write(dir.path(), "plus.csv", "0.5\n0.5\n");
    let out = dir.path().join("rows.csv");
    let output = run(&[
        "interaction",
        "--list-minus",
        &minus,
        "--list-plus",
        &plus,
        "--n-max",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,lhs,floor"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    let lhs: f64 = first[1].parse().unwrap();
    assert!((lhs - 0.625).abs() < 1e-12);
    assert!(text.contains("# verdict holds"));
}

#[test]
fn interaction_requires_a_complete_input_mode() {
    let output = run(&["interaction", "--p", "2", "--n-max", "2"]);
    assert_eq!(output.status.code(), Some(2));
    // clap rejects mixing the two modes outright.
    let dir = tempfile::tempdir().unwrap();
    let minus = write(dir.path(), "m.csv", "1.0\n");
    let output = run(&[
        "interaction",
        "--p",
        "1",
        "--q",
        "2",
        "--list-minus",
        &minus,
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["tensor", "--help"]).status.code(), Some(0));
}
