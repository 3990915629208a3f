use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use weakshock::ccw::read_ccw_csv;
use weakshock::transport::{closed_form, ShockHistory};
use weakshock::wavefront::FittedShock;
use weakshock::{GasParams, Geometry};

fn weakshock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakshock"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn evolve_matches_closed_form_and_is_deterministic() {
    let args = ["evolve", "--geometry", "cylindrical", "--h", "0.32", "--k", "10", "--x-end", "100"];
    let a = weakshock(&args);
    let b = weakshock(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);

    let hist = ShockHistory::read_csv(a.stdout.as_slice()).unwrap();
    assert!(hist.breakdown.is_none());
    assert_eq!(hist.last().unwrap().x, 100.0);
    for s in &hist.samples {
        let (p, px) = closed_form(s.x, 0.32, 10.0, GasParams::AIR, Geometry::Cylindrical).unwrap();
        assert!((s.p_jump / p - 1.0).abs() < 1e-8);
        assert!((s.px_jump / px - 1.0).abs() < 1e-8);
    }
}

#[test]
fn evolve_reports_breakdown_without_failing() {
    let out = weakshock(&["evolve", "--geometry", "cylindrical", "--h", "0.1", "--k", "-1", "--x-end", "10"]);
    assert_eq!(code(&out), 0);
    let hist = ShockHistory::read_csv(out.stdout.as_slice()).unwrap();
    let xb = hist.last().unwrap().x;
    assert!((xb - (1.0 + 1.0 / 2.4f64).powi(2)).abs() < 1e-6, "{xb}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("blows up"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "bad.toml", "gama = 1.4\n");
    let cases: [&[&str]; 5] = [
        &["evolve", "--k", "1"],
        &["evolve", "--h", "-0.1", "--k", "1"],
        &["evolve", "--h", "0.1", "--k", "1", "--gamma", "0.9"],
        &["evolve", "--config", &unknown, "--h", "0.1", "--k", "1"],
        &["compare-methods", "--h", "0.5"],
    ];
    for args in cases {
        let out = weakshock(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.toml",
        "geometry = \"spherical\"\nh = 0.2\nk = 3.0\nx_end = 50.0\n\n[evolve]\nsamples = 7\n",
    );
    let out_path = dir.path().join("hist.csv");
    let out = weakshock(&["evolve", "--config", &cfg, "--k", "0.5", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let hist = ShockHistory::read_csv(fs::File::open(&out_path).unwrap()).unwrap();
    assert_eq!(hist.last().unwrap().x, 50.0);
    let s = &hist.samples[0];
    assert_eq!((s.x, s.p_jump, s.px_jump), (1.0, 0.2, 0.5));
}

#[test]
fn asymptote_writes_both_laws() {
    let out = weakshock(&["asymptote", "--h", "0.32", "--k", "0.28", "--x-end", "1e4", "--samples", "20"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,p_closed,px_closed,p_asym,px_asym"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 1e4);
    assert!((last[2] / last[4] - 1.0).abs() < 1e-3);
}

#[test]
fn table1_prints_both_sets() {
    let out = weakshock(&["table1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.476") && text.contains("100"));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    assert_eq!(code(&weakshock(&["table1", "--out", csv.to_str().unwrap()])), 0);
    let rows = fs::read_to_string(csv).unwrap();
    assert_eq!(rows.lines().count(), 27);
}

#[test]
fn fit_shock_half_sine_and_table_pulse() {
    let out = weakshock(&["fit-shock", "--samples", "40"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let s = FittedShock::read_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(s.len(), 40);
    assert!(s.windows(2).all(|w| w[1].tau_minus >= w[0].tau_minus));
    assert_eq!(s.last().unwrap().x, 1e4);

    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "pulse.csv", "tau,v\n0,0\n0.25,0.07\n0.5,0.1\n0.75,0.07\n1,0\n");
    let cfg = write(dir.path(), "fit.toml", "x_end = 1000.0\n\n[fit_shock]\nfile = \"pulse.csv\"\nsamples = 10\n");
    let out = weakshock(&["fit-shock", "--config", &cfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(FittedShock::read_csv(out.stdout.as_slice()).unwrap().len(), 10);
}

#[test]
fn zero_pulse_is_a_numerical_failure() {
    let out = weakshock(&["fit-shock", "--v0", "0"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn ccw_output_parses() {
    let out = weakshock(&["ccw", "--geometry", "spherical", "--mach0", "1.5", "--x-end", "1e3", "--variant", "generalized"]);
    assert_eq!(code(&out), 0);
    let s = read_ccw_csv(out.stdout.as_slice()).unwrap();
    assert_eq!(s[0].mach, 1.5);
    assert!(s.windows(2).all(|w| w[1].mach < w[0].mach));
}

#[test]
fn compare_methods_report_and_partial_exit() {
    let out = weakshock(&["compare-methods", "--geometry", "planar"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v["exponents"][0];
    assert_eq!(row["geometry"], "planar");
    assert!((row["transport"].as_f64().unwrap() + 0.5).abs() < 0.01);
    assert!(v["failures"].as_array().unwrap().is_empty());

    // a pulse this long has not formed a shock by the start of the window
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "[compare]\npulse_v0 = 1e-3\npulse_tau0 = 100.0\n");
    let out = weakshock(&["compare-methods", "--config", &cfg, "--geometry", "planar"]);
    assert_eq!(code(&out), 4);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["failures"][0].as_str().unwrap().starts_with("wngo"));
}
