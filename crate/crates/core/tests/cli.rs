use std::process::{Command, Output};

use bilinear_lab::experiments::{ExperimentConfig, Family, GridConfig, CSV_HEADER};
use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilinear-lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn indices_command() {
    let out = lab(&["indices", "--p1", "2", "--p2", "2", "--p", "2", "--m", "-1/2"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["m_critical"], "-1/2");
    assert_eq!(doc["kappa"], "0");
    assert_eq!(doc["sufficiency"]["verdict"], "critical_ok");
    assert_eq!(doc["classification"], "BoundedByTheorem");

    let bad = lab(&["indices", "--p1", "0", "--p2", "2", "--p", "2", "--m", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn suite_command() {
    let out = lab(&["suite", "partitions"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS partitions")), "{text}");
    assert_eq!(lab(&["suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn apply_and_norms_commands() {
    let out = lab(&["apply", "--symbol", "constant", "--f1", "[[1,0,1,0]]", "--f2", "[[2,0,0,1]]"]);
    assert!(out.status.success());
    let doc = json(&out);
    let spectrum = doc["spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 1);
    let row: Vec<f64> = spectrum[0].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(row[0], 3.0);
    assert!(row[2].abs() < 1e-12 && (row[3] - 1.0).abs() < 1e-12);

    let out = lab(&["norms", "--spectrum", "[[0,0,1,0]]", "--p", "2"]);
    assert!(out.status.success());
    let l2 = json(&out)["lebesgue"].as_f64().unwrap();
    assert!((l2 - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
}

#[test]
fn sharpness_command_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::default_for(Family::Antidiag);
    cfg.grid = GridConfig { n: 1, size: 4096, band_limit: 1024 };
    let config = dir.path().join("cfg.json");
    std::fs::write(&config, cfg.to_json()).unwrap();
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.json");
    let out = lab(&[
        "sharpness",
        "--config",
        config.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text.lines().count(), 1 + cfg.family.levels.len());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(doc["verdict"], true);

    let printed = lab(&["sharpness", "--family", "cone-dyadic", "--print-config"]);
    assert!(printed.status.success());
    let back = ExperimentConfig::from_json(std::str::from_utf8(&printed.stdout).unwrap()).unwrap();
    assert_eq!(back, ExperimentConfig::default_for(Family::ConeDyadic));
}
