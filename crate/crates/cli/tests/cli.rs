use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn filament(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filament")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const FLAT: &str = r#"
n = 8
h = [1.0]
eps = [0.1, 0.05]
seed = 7
[model]
kind = "flat-torus"
length = 6.283185307179586
"#;

#[test]
fn low_dimension_is_a_condition_failure() {
    let o = filament(&["constants", "--n", "7"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "n = 8\nbogus = 1\n").unwrap();
    assert_eq!(code(&filament(&["--config", cfg.to_str().unwrap(), "ode"])), 2);
    let out = dir.path().join("o");
    // Monte-Carlo without a seed
    assert_eq!(code(&filament(&["residual", "--out", out.to_str().unwrap()])), 2);
    assert_eq!(code(&filament(&["reduce", "--eps", "0.01,0.1"])), 2);
    assert_eq!(code(&filament(&["geodesic", "--model", "klein"])), 2);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ode.toml");
    std::fs::write(&cfg, "regime = \"supercritical\"\n[ode]\nsigma = [-0.6, 0.1]\n").unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "ode"];
    let (a, b) = (filament(&args), filament(&args));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "filament.ode");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["regime"], "supercritical");
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn constants_report_tables_every_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let o = filament(&["constants", "--out", dir.path().to_str().unwrap()]);
    let v = read_json(&dir.path().join("constants.json"));
    let rows = v["body"]["comparisons"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let failed = rows.iter().any(|r| r["checked"] == true && r["passed"] == false);
    assert_eq!(v["passed"], !failed);
    assert_eq!(code(&o), if failed { 5 } else { 0 });
    let b = rows.iter().find(|r| r["name"] == "b_n").unwrap();
    assert_eq!(b["passed"], true);
}

#[test]
fn flat_torus_geodesic_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let o = filament(&["geodesic", "--model", "flat", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&dir.path().join("geodesic.json"));
    assert_eq!(v["body"]["verdict"], "degenerate");
    assert_eq!(v["body"]["spectral_gap"].as_f64().unwrap(), 0.0);
    assert!(v["body"]["curvature"]["max_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn flat_reduce_gives_the_constant_balance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("flat.toml");
    std::fs::write(&cfg, FLAT).unwrap();
    let c = filament(&["constants", "--out", dir.path().to_str().unwrap()]);
    assert!(matches!(code(&c), 0 | 5));
    let consts = read_json(&dir.path().join("constants.json"));
    let (a_n, b_n) = (
        consts["body"]["constants"]["a_n"].as_f64().unwrap(),
        consts["body"]["constants"]["b_n"].as_f64().unwrap(),
    );
    let o = filament(&["--config", cfg.to_str().unwrap(), "reduce", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&dir.path().join("reduce.json"));
    // σ ≡ 1: the constant solution has μ² = b_n/a_n
    let want = (b_n / a_n).sqrt();
    for m in v["body"]["pipeline"]["mu0"]["mu"]["values"].as_array().unwrap() {
        assert!((m.as_f64().unwrap() - want).abs() < 1e-9 * want);
    }
    assert_eq!(v["body"]["gap"].as_array().unwrap().len(), 2);
}

#[test]
fn residual_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("flat.toml");
    std::fs::write(&cfg, FLAT).unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = filament(&[
            "--config",
            cfg.to_str().unwrap(),
            "residual",
            "--generic-mu",
            "--eps",
            "0.08,0.04,0.02,0.01,0.005",
            "--budget",
            "10000",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (std::fs::read(out.join("residual.csv")).unwrap(), std::fs::read(out.join("residual.json")).unwrap())
    };
    let (csv1, json1) = run("a");
    let (csv2, json2) = run("b");
    assert_eq!(csv1, csv2);
    assert_eq!(json1, json2);
    let text = String::from_utf8(csv1).unwrap();
    assert_eq!(text.lines().next(), Some("eps,channel,estimate,stderr"));
    // two radial channels, five ε values, no translation run in generic mode
    assert_eq!(text.lines().count(), 11);
    let v: Value = serde_json::from_slice(&json1).unwrap();
    assert_eq!(v["body"]["mode"], "generic");
    assert!(v["body"]["translation"].is_null());
}

#[test]
fn residual_needs_a_closed_form_chart() {
    let dir = tempfile::tempdir().unwrap();
    let o = filament(&["residual", "--model", "sphere", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}
