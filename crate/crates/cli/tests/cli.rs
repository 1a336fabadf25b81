//! Binary-level checks: subcommand wiring, file outputs, exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_projline"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("projline-cli-tests").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fourier_spec(dir: &std::path::Path) -> PathBuf {
    let path = dir.join("d.json");
    std::fs::write(
        &path,
        r#"{"type":"fourier","harmonics":[{"k":1,"a":0.1,"b":0.0}]}"#,
    )
    .unwrap();
    path
}

#[test]
fn schwarzian_subcommand_writes_csv_and_summary() {
    let dir = workdir("schwarzian");
    let input = write_fourier_spec(&dir);
    let out = dir.join("s.csv");
    let output = bin()
        .args(["schwarzian", "--input"])
        .arg(&input)
        .args(["--n", "256", "--json", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");

    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(summary["projective_points"].as_u64().unwrap() >= 4);

    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "alpha,f,fdot,S,k");
    assert_eq!(lines.count(), 256);
}

#[test]
fn counterexample_subcommand_reports_the_twist_constant() {
    let dir = workdir("counterexample");
    let out = dir.join("c.csv");
    let output = bin()
        .args([
            "counterexample",
            "--epsilon",
            "0.01",
            "--n",
            "256",
            "--json",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((summary["det2_mean"].as_f64().unwrap() - 0.0192).abs() < 1e-9);
    assert_eq!(summary["flattenings"], serde_json::json!(0));
    assert!(out.exists());
}

#[test]
fn sphere_subcommand_reports_bisection() {
    let dir = workdir("sphere");
    let input = write_fourier_spec(&dir);
    let output = bin()
        .args(["sphere", "--input"])
        .arg(&input)
        .args(["--n", "256", "--json"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((summary["area"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-4);
    assert_eq!(summary["winding"], serde_json::json!(1));
}

#[test]
fn sturm_compare_defaults_to_the_unit_potential() {
    let dir = workdir("sturm");
    let input = write_fourier_spec(&dir);
    let output = bin()
        .args(["sturm-compare", "--input"])
        .arg(&input)
        .args(["--n", "256", "--json"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(summary["zeros"].as_u64().unwrap() >= 4);
    assert!(summary["orthogonality"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn mobius_input_is_reported_as_projective() {
    let dir = workdir("mobius");
    let input = dir.join("m.json");
    std::fs::write(
        &input,
        r#"{"type":"mobius","matrix":[[1.3,0.2],[-0.1,0.9]]}"#,
    )
    .unwrap();
    let output = bin()
        .args(["schwarzian", "--input"])
        .arg(&input)
        .args(["--n", "256", "--json"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["projective"], serde_json::json!(true));
}

#[test]
fn invalid_input_exits_with_code_two() {
    let dir = workdir("invalid");
    let input = dir.join("bad.json");
    std::fs::write(
        &input,
        r#"{"type":"fourier","harmonics":[{"k":1,"a":0.9,"b":0.0}]}"#,
    )
    .unwrap();
    let output = bin()
        .args(["schwarzian", "--input"])
        .arg(&input)
        .args(["--n", "256"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2), "{output:?}");

    let missing = bin()
        .args(["schwarzian", "--input", "/nonexistent/x.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let bad_config = bin().args(["verify", "--seeds", "0"]).output().unwrap();
    assert_eq!(bad_config.status.code(), Some(2));
}

#[test]
fn verify_smoke_run_passes_and_writes_report() {
    let dir = workdir("verify");
    let out = dir.join("report.json");
    let output = bin()
        .args([
            "verify", "--seed", "7", "--seeds", "3", "--pairs", "1", "--n", "512", "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["seed"], serde_json::json!(7));
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("schwarzian_zero_count"));
}
