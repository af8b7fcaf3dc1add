//! End-to-end tests of the `caustics` binary: exit codes, output files,
//! and thread-count independence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caustics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn summary(dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("summary.json")).expect("summary exists");
    serde_json::from_str(&text).expect("summary parses")
}

const CIRCLE_BIRKHOFF: &str = r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "birkhoff"

[rotation]
m = 1
n = 3
"#;

#[test]
fn find_graph_accepts_the_circle_triangle() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), CIRCLE_BIRKHOFF);
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let summary = summary(&out);
    assert_eq!(summary["status"], "accepted");
    assert!(summary["sup_delta2"].as_f64().unwrap() < 1e-9);
    assert_eq!(summary["rotation"]["m"], 1);
    assert_eq!(summary["rotation"]["n"], 3);
    let csv = std::fs::read_to_string(out.join("graph.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("q,eta,delta1,delta2"));
    assert_eq!(lines.count(), 256);
}

#[test]
fn find_graph_reports_missing_roots() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "symplectic"

[rotation]
m = 1
n = 2
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 2);
    let summary = summary(&out);
    assert_eq!(summary["status"], "no-root");
    assert!(!out.join("graph.csv").exists());
}

#[test]
fn rejected_candidate_still_exits_cleanly() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 0.8660254037844386

[model]
kind = "birkhoff"

[rotation]
m = 1
n = 2

[solver]
grid = 64
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0);
    let summary = summary(&out);
    assert_eq!(summary["status"], "rejected");
    assert!(summary["sup_delta2"].as_f64().unwrap() > 1e-5);
    assert!(out.join("graph.csv").exists());
}

#[test]
fn config_errors_write_no_files() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[model]
kind = "birkhoff"
bogus = 3
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "twist-interval",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    assert!(!out.exists(), "config errors must not create output");
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("bogus"), "stderr: {stderr}");
}

#[test]
fn missing_sections_are_config_errors() {
    let dir = TempDir::new().unwrap();
    // find-graph without a [rotation] section.
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "birkhoff"
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    assert!(!out.exists());
}

#[test]
fn shear_model_rejects_a_domain_section() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "shear"
offset = 0.1

[rotation]
m = 1
n = 2
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    assert!(!out.exists());
}

#[test]
fn invalid_rotation_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "birkhoff"

[rotation]
m = 2
n = 4
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    assert!(!out.exists());
}

#[test]
fn zero_workers_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), CIRCLE_BIRKHOFF);
    let out = dir.path().join("out");
    let result = run(&[
        "find-graph",
        "--config",
        config.to_str().unwrap(),
        "--workers",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    assert!(!out.exists());
}

#[test]
fn certify_passes_on_the_circle() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), CIRCLE_BIRKHOFF);
    let out = dir.path().join("out");
    let result = run(&[
        "certify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let summary = summary(&out);
    assert_eq!(summary["status"], "certified");
    let checks = summary["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c["passed"].as_bool().unwrap()));
}

#[test]
fn certify_requires_an_accepted_candidate() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 0.8660254037844386

[model]
kind = "birkhoff"

[rotation]
m = 1
n = 2

[solver]
grid = 64
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "certify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3);
    let summary = summary(&out);
    assert_eq!(summary["status"], "precondition-failed");
}

#[test]
fn certify_skips_minimality_without_a_generating_function() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[domain]
kind = "ellipse"
a = 1.0
b = 1.0

[model]
kind = "outer"

[rotation]
m = 1
n = 3
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "certify",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let summary = summary(&out);
    assert_eq!(summary["status"], "certified");
    assert_eq!(summary["skipped"][0], "minimality");
    assert_eq!(summary["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn twist_interval_recovers_the_shear_window() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[model]
kind = "shear"
offset = 0.1
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "twist-interval",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0);
    let summary = summary(&out);
    assert_eq!(summary["status"], "ok");
    let estimate = &summary["estimate"];
    assert!((estimate["lower"].as_f64().unwrap() - 0.1).abs() < 1e-9);
    assert!((estimate["upper"].as_f64().unwrap() - 1.1).abs() < 1e-9);
    let csv = std::fs::read_to_string(out.join("twist.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4, "header plus one row per margin");
}

#[test]
fn phase_portrait_writes_orbits_and_svg() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[model]
kind = "shear"
offset = 0.1

[portrait]
orbits = 5
steps = 50
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "phase-portrait",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0);
    let summary = summary(&out);
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["orbits"], 5);
    assert_eq!(summary["truncated"], 0);
    let csv = std::fs::read_to_string(out.join("orbits.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 51);
    let svg = std::fs::read_to_string(out.join("portrait.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn scan_family_reports_the_isolated_circle() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[family]
kind = "ellipse-eccentricity"
model = "birkhoff"
m = 1
n = 2
eps_lo = 0.0
eps_hi = 0.4
samples = 3

[solver]
grid = 64
"#,
    );
    let out = dir.path().join("out");
    let result = run(&[
        "scan-family",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0, "stderr: {}", String::from_utf8_lossy(&result.stderr));
    let summary = summary(&out);
    assert_eq!(summary["classification"]["kind"], "isolated-points");
    assert_eq!(summary["classification"]["eps"][0], 0.0);
    assert_eq!(summary["records"].as_array().unwrap().len(), 3);
    assert!(summary["caveat"].as_str().unwrap().contains("numerical evidence"));
    let csv = std::fs::read_to_string(out.join("scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(out.join("scan.svg").exists());
}

#[test]
fn scan_output_is_byte_identical_across_worker_counts() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        r#"
[family]
kind = "ellipse-eccentricity"
model = "birkhoff"
m = 1
n = 3
eps_lo = 0.0
eps_hi = 0.4
samples = 4

[solver]
grid = 64
"#,
    );
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let out = dir.path().join(format!("out-{workers}"));
        let result = run(&[
            "scan-family",
            "--config",
            config.to_str().unwrap(),
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&result), 0);
        let csv = std::fs::read(out.join("scan.csv")).unwrap();
        let svg = std::fs::read(out.join("scan.svg")).unwrap();
        let json = std::fs::read(out.join("summary.json")).unwrap();
        outputs.push((csv, svg, json));
    }
    assert_eq!(outputs[0], outputs[1], "scan output depends on the worker count");
}
