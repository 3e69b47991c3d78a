use std::path::Path;
use std::process::{Command, Output};

use lrti::{epsilon_range, epsilon_scan, magnetization_field, time_grid, ModelParams, Window};
use serde_json::Value;

fn lrti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrti")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn run_to(args: &[&str], dest: &Path) {
    let mut all = args.to_vec();
    all.extend(["--out", dest.to_str().unwrap()]);
    let out = lrti(&all);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn predict_quasi_local_global() {
    let v = json_of(&lrti(&["predict", "--alpha", "1.7"]));
    assert!((v["global"]["beta_edge"].as_f64().unwrap() - 1.3).abs() < 1e-12);
    assert_eq!(v["global"]["beta_m"].as_f64().unwrap(), 1.0);
    assert_eq!(v["config"]["model.alpha"], "1.7");
}

/// `f = 1` once `t ≥ a R^1.4`, zero before.
fn synthetic_field(path: &Path) {
    let mut text = String::from("# observable=Sz_local\nR,t,value\n");
    let t_grid = time_grid(400.0, 0.1).unwrap();
    for &t in &t_grid {
        for r in 1..=128usize {
            let arrival = 0.2 * (r as f64).powf(1.4);
            let v = if t >= arrival { 1.0 } else { 0.0 };
            text.push_str(&format!("{r},{t:.16e},{v:.16e}\n"));
        }
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn fit_edge_recovers_synthetic_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("synthetic.csv");
    synthetic_field(&field);
    let v = json_of(&lrti(&["fit-edge", "--input", field.to_str().unwrap(), "--eps", "0.1:0.9"]));
    let beta = v["beta_mean"].as_f64().unwrap();
    assert!((1.38..=1.42).contains(&beta), "beta = {beta}");
    assert_eq!(v["epsilon_list"].as_array().unwrap().len(), 7);
    for fit in v["fits"].as_array().unwrap() {
        for key in ["epsilon", "beta", "a", "stderr", "r2", "window"] {
            assert!(!fit[key].is_null(), "missing {key}");
        }
    }
}

#[test]
fn written_field_analyses_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("sz.csv");
    run_to(&["local-quench", "--alpha", "2.5", "--N", "128", "--tmax", "60", "--grid.r_min", "8"], &field);
    let text = std::fs::read_to_string(&field).unwrap();
    assert!(text.contains("# config.model.alpha=2.5"));
    assert!(text.contains("\nR,t,value\n"));

    let v = json_of(&lrti(&["fit-edge", "--input", field.to_str().unwrap()]));
    let p = ModelParams::<f64>::new(1.0, 50.0, 2.5, 128).unwrap();
    let r: Vec<usize> = (8..=64).collect();
    let direct = magnetization_field(&p, &r, &time_grid(60.0, 0.1).unwrap()).unwrap();
    let scan = epsilon_scan(&direct, &epsilon_range(0.01, 0.12, 12).unwrap(), Window::new(8.0, 0.8 * 64.0).unwrap())
        .unwrap();
    assert_eq!(v["beta_mean"].as_f64().unwrap().to_bits(), scan.beta_mean.to_bits());
    assert_eq!(v["source"]["alpha"], "2.5");
}

#[test]
fn entanglement_edge_is_ballistic() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("s1.csv");
    run_to(&["entanglement", "--alpha", "2.5", "--N", "512", "--h-over-J", "50", "--tmax", "350", "--dt", "0.1"], &field);
    let v = json_of(&lrti(&["fit-edge", "--input", field.to_str().unwrap(), "--eps", "0.2:0.8"]));
    let beta = v["beta_mean"].as_f64().unwrap();
    assert!((beta - 1.0).abs() < 0.05, "beta = {beta}");
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "model.alpha = 3\nmodel.N = 32\n").unwrap();
    let v = json_of(&lrti(&["predict", "--config", cfg.to_str().unwrap(), "--model.N=64"]));
    assert_eq!(v["config"]["model.alpha"], "3");
    assert_eq!(v["config"]["model.N"], "64");
    assert_eq!(v["global"]["regime"], "local");
}

fn assert_exit(args: &[&str], code: i32, name: &str) {
    let out = lrti(args);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(code), "stderr: {stderr}");
    assert!(stderr.contains(&format!("error[{name}]")), "stderr: {stderr}");
}

#[test]
fn exit_codes_follow_error_category() {
    assert_exit(&["predict", "--model.beta", "1"], 2, "ConfigError");
    assert_exit(&["oracle-compare", "--N", "64"], 2, "SizeLimit");
    assert_exit(&["dispersion", "--alpha", "1.5", "--J", "1", "--h", "0.5", "--N", "64"], 3, "StabilityViolation");

    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    let mut text = String::from("# observable=Gx\nR,t,value\n");
    for t in 0..3 {
        for r in 1..=40 {
            let v = if r == 1 && t > 0 { 1.0 } else { 0.0 };
            text.push_str(&format!("{r},{t},{v}\n"));
        }
    }
    std::fs::write(&flat, text).unwrap();
    let out = lrti(&["fit-edge", "--input", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn oracle_compare_local_agrees() {
    let v = json_of(&lrti(&["oracle-compare", "--oracle.mode", "local", "--N", "8", "--alpha", "1.7", "--oracle.t_max", "1"]));
    assert!(v["lambda3_max"].as_f64().unwrap() < 1e-3);
    assert!(v["s1_max_diff"].as_f64().unwrap() < 0.05);
}
