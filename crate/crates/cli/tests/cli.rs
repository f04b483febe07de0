use std::path::PathBuf;
use std::process::{Command, Output};

use orbit_bergman::modular::delta_q;
use orbit_bergman_cli::verify::check_a6;
use orbit_bergman_cli::{RunConfig, read_record, render, run_experiment};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbit-bergman")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbit-bergman-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn invalid_weight_exits_with_status_two() {
    let out = bin(&["vndim", "--preset", "pslz", "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    assert_eq!(bin(&["vndim", "--colour", "red"]).status.code(), Some(2));
}

#[test]
fn module_errors_exit_with_status_one() {
    let out = bin(&["tracelike", "--budget-norm", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "poincare");
}

#[test]
fn vndim_reports_one_sixth() {
    let path = scratch("vndim.json");
    let out = bin(&["vndim", "--preset", "pslz", "--s", "3", "--basis-n", "60", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rec = read_record(&path).unwrap();
    let report = &rec.payload["reports"][0];
    assert_eq!(report["formula_exact"], "1/6");
    assert!((report["formula"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-16);
    assert!(report["ratio"].as_f64().unwrap() < 1.0);
}

#[test]
fn density_slope_near_six() {
    let out = bin(&["density", "--preset", "pslz", "--z", "2i", "--budget-norm", "150"]);
    assert!(out.status.success());
    let rec: Value = serde_json::from_slice(&out.stdout).unwrap();
    let slope = rec["payload"]["reports"][0]["slope"].as_f64().unwrap();
    assert!((slope / 6.0 - 1.0).abs() < 0.1, "{slope}");
}

#[test]
fn identical_runs_write_identical_bytes() {
    let a = scratch("det_a.json");
    let b = scratch("det_b.json");
    for p in [&a, &b] {
        let out = bin(&["extremal", "--points", "40", "--seed", "3", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let mut cfg = RunConfig::defaults(orbit_bergman_cli::Command::Density);
    cfg.budget_norm = 80;
    let rec = run_experiment(&cfg).unwrap();
    let csv = String::from_utf8(render(&rec, orbit_bergman_cli::Format::Csv).unwrap()).unwrap();
    let json: Value = serde_json::from_slice(&render(&rec, orbit_bergman_cli::Format::Json).unwrap()).unwrap();
    let rows = json["payload"]["table"]["rows"].as_array().unwrap();
    let lines: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(lines.len(), rows.len());
    for (line, row) in lines.iter().zip(rows) {
        let from_csv: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        let from_json: Vec<f64> = row.as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
        assert_eq!(from_csv, from_json);
    }
}

#[test]
fn json_round_trip_reproduces_the_record() {
    for cmd in ["vndim", "poincare", "wandering", "dims", "forms"] {
        let mut cfg = RunConfig::defaults(cmd.parse_enum());
        cfg.basis_n = 40;
        let rec = run_experiment(&cfg).unwrap();
        let path = scratch(&format!("rt_{cmd}.json"));
        std::fs::write(&path, render(&rec, orbit_bergman_cli::Format::Json).unwrap()).unwrap();
        assert_eq!(read_record(&path).unwrap(), rec, "{cmd}");
    }
}

trait ParseCommand {
    fn parse_enum(&self) -> orbit_bergman_cli::Command;
}

impl ParseCommand for &str {
    fn parse_enum(&self) -> orbit_bergman_cli::Command {
        <orbit_bergman_cli::Command as clap::ValueEnum>::from_str(self, true).unwrap()
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let file = scratch("run.conf");
    std::fs::write(&file, "command = vndim\n# weights\ns = 3\nbasis-n = 30\nformat = csv\n").unwrap();
    let out = bin(&["--config", file.to_str().unwrap(), "--basis-n", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("s,n,partial_sum\n"));
    assert_eq!(text.lines().count(), 1 + 21);
}

#[test]
fn tampered_delta_coefficient_fails_a6() {
    let mut delta = delta_q(200).unwrap();
    assert!(check_a6(&delta).passed);
    delta.coeffs[2] = &delta.coeffs[2] - 1;
    let r = check_a6(&delta);
    assert!(!r.passed);
    assert!(r.detail.contains("a_2"), "{}", r.detail);
}
