use std::path::{Path, PathBuf};
use std::process::Command;

use cpslab_cli::config::RunConfig;
use cpslab_cli::csvio::Table;
use cpslab_cli::presets;
use cpslab_cli::sweep::run_sweep;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpslab"))
}

fn sample_params() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/decca_sample.toml")
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .parse()
        .unwrap()
}

const FORCE_SWEEP: &str = r#"
[material]
model = "plasma"
alpha = 10.0

[sweep]
quantity = "force"
variable = "x"
min = 1e-3
max = 1e2
points_per_decade = 20
"#;

#[test]
fn force_sweep_has_101_rows() {
    let t = run_sweep(&RunConfig::from_toml_str(FORCE_SWEEP).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 101);
    assert_eq!(t.columns, ["x", "ibar_parallel_M", "ibar_perp_M", "F_M"]);
    assert!(t.column("F_M").unwrap().iter().all(|f| *f > 0.0));
}

#[test]
fn vacuum_force_column_is_zero() {
    let text = FORCE_SWEEP.replace("\"plasma\"", "\"vacuum\"").replace("alpha = 10.0", "");
    let t = run_sweep(&RunConfig::from_toml_str(&text).unwrap()).unwrap();
    assert!(t.column("F_M").unwrap().iter().all(|f| *f == 0.0));
}

#[test]
fn sweep_is_deterministic_and_round_trips() {
    let c = RunConfig::from_toml_str(FORCE_SWEEP).unwrap();
    let a = run_sweep(&c).unwrap().render().unwrap();
    let b = run_sweep(&c).unwrap().render().unwrap();
    assert_eq!(a, b);
    assert_eq!(Table::parse(&a).unwrap().render().unwrap(), a);
}

#[test]
fn metadata_reproduces_the_run() {
    let first = run_sweep(&RunConfig::from_toml_str(FORCE_SWEEP).unwrap()).unwrap();
    let replay = RunConfig::from_toml_str(&first.metadata_text()).unwrap();
    assert_eq!(run_sweep(&replay).unwrap().render().unwrap(), first.render().unwrap());
}

#[test]
fn binary_sweep_matches_library_and_reruns_from_its_own_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, FORCE_SWEEP).unwrap();
    let out1 = dir.path().join("a.csv");
    run_ok(&["sweep", "--config", cfg.to_str().unwrap(), "--output", out1.to_str().unwrap()]);
    let text1 = std::fs::read_to_string(&out1).unwrap();

    let meta = dir.path().join("meta.toml");
    std::fs::write(&meta, Table::parse(&text1).unwrap().metadata_text()).unwrap();
    let text2 = run_ok(&["sweep", "--config", meta.to_str().unwrap()]);
    assert_eq!(text1, text2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, FORCE_SWEEP).unwrap();
    let text = run_ok(&["sweep", "--config", cfg.to_str().unwrap(), "--min", "1", "--max", "10", "--points-per-decade", "4"]);
    assert_eq!(Table::parse(&text).unwrap().rows.len(), 5);
}

#[test]
fn epsilon_query() {
    let out = run_ok(&["epsilon", "--model", "plasma", "--omega-p-ev", "9", "--at-ev", "9"]);
    assert!((value(&out, "epsilon_imag_axis") - 2.0).abs() < 1e-7);
}

#[test]
fn sigma_query_high_q() {
    let out = run_ok(&["sigma", "--q", "100", "--impurity", "13.61"]);
    let s2 = value(&out, "sigma2_over_sigman");
    let expect = std::f64::consts::PI * 100.0 * (1.0 - 0.2464);
    assert!((s2 / expect - 1.0).abs() < 1e-3, "{s2} vs {expect}");
}

#[test]
fn force_query_far_field() {
    let out = run_ok(&["force", "--model", "perfect-conductor", "--x", "20"]);
    let f = value(&out, "F_M");
    assert!((f * 20.0 * std::f64::consts::PI / 6.0 - 1.0).abs() < 0.05);
    assert!(out.contains("regime_M=far-field"));
}

#[test]
fn shift_and_rate_queries() {
    let common = ["--model", "perfect-conductor", "--omega-ev", "1e-6", "--z-m", "1e-6"];
    let shift = run_ok(&[&["shift"][..], &common].concat());
    assert!(value(&shift, "delta_omega_M_rad_s").is_finite());
    let rate = run_ok(&[&["rate"][..], &common].concat());
    assert!(value(&rate, "gamma_ratio_M") >= 0.0);
}

#[test]
fn missing_key_is_named() {
    let out = bin().args(["force", "--model", "plasma", "--x", "1"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("material.omega_p_ev"), "{err}");
}

#[test]
fn unknown_config_key_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[material]\nmodle = \"plasma\"\n").unwrap();
    let out = bin().args(["force", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn decca_needs_param_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().args(["figure", "fig-decca", "--output-dir", dir.path().to_str().unwrap()]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--param-file"));
}

#[test]
fn decca_with_sample_parameters() {
    let curves = presets::preset("fig-decca", Some(&sample_params())).unwrap();
    assert_eq!(curves.len(), 2);
    let six = &curves[1].config;
    assert_eq!(six.material.oscillators.as_ref().unwrap().len(), 6);
    assert!(six.material.param_file.is_none());
}
