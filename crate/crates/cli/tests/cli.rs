use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use shiftrad_cli::{auto_method, NumradMethod};

fn shiftrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftrad")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = shiftrad(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn value(v: &Value) -> f64 {
    v["value"].as_f64().unwrap()
}

fn read_csv(path: &std::path::Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn numrad_two_zeros() {
    let v = json(&["numrad", "--zeros", "0,0.5"]);
    assert!((value(&v) - 0.75).abs() < 1e-15);
    assert_eq!(v["method"], "closed_form");
    let raw = String::from_utf8(shiftrad(&["numrad", "--zeros", "0,0.5"]).stdout).unwrap();
    let at = |key: &str| raw.find(&format!("\"{key}\":")).unwrap();
    let keys = ["value", "method", "cross_checks", "warnings", "diagnostics", "inputs_echo", "config_echo"];
    assert!(keys.windows(2).all(|w| at(w[0]) < at(w[1])), "{raw}");
}

#[test]
fn numrad_jordan_block_by_roots() {
    let v = json(&["numrad", "--zeros", "0,0,0", "--method", "roots"]);
    assert!((value(&v) - std::f64::consts::FRAC_PI_4.cos()).abs() < 1e-14);
    assert_eq!(v["method"], "root_method");
}

#[test]
fn numrad_complex_zeros_by_oracle() {
    let oracle = json(&["numrad", "--zeros", "0.2+0.3i,-0.1", "--method", "oracle"]);
    let pick = json(&["numrad", "--zeros", "0.2+0.3i,-0.1", "--method", "pick"]);
    let limit = json(&["numrad", "--zeros", "0.2+0.3i,-0.1", "--method", "limit"]);
    assert_eq!(oracle["method"], "oracle");
    assert!((value(&oracle) - value(&pick)).abs() < 1e-6);
    assert!((value(&oracle) - value(&limit)).abs() < 1e-6);
    let auto = json(&["numrad", "--zeros", "0.2+0.3i,-0.1"]);
    assert_eq!(auto["method"], "oracle");
}

#[test]
fn numrad_methods_agree_on_real_zeros() {
    let zeros = "-0.3,0.1,0.6";
    let closed = value(&json(&["numrad", "--zeros", zeros, "--method", "closed"]));
    for m in ["roots", "oracle", "limit", "pick"] {
        let v = value(&json(&["numrad", "--zeros", zeros, "--method", m]));
        assert!((v - closed).abs() < 1e-6, "{m}: {v} vs {closed}");
    }
}

#[test]
fn norm_routes() {
    let pick = json(&["norm", "--zeros", "0,0.5", "--t", "0.1", "--method", "pick"]);
    let svd = json(&["norm", "--zeros", "0,0.5", "--t", "0.1", "--method", "svd"]);
    let ft = json(&["norm", "--zeros", "0,0.5", "--t", "0.1", "--method", "ft"]);
    assert!((value(&pick) - 1.075914).abs() < 1e-6, "{}", value(&pick));
    assert!((value(&pick) - value(&svd)).abs() < 1e-10);
    assert!((value(&ft) - value(&pick)).abs() < 1e-8);
    assert_eq!(pick["inputs_echo"]["t"], "0.1");
}

#[test]
fn norm_at_zero_perturbation() {
    let v = json(&["norm", "--zeros", "0,0.5", "--t", "0", "--method", "svd"]);
    assert_eq!(value(&v), 1.0);
}

#[test]
fn norm_complex_perturbation() {
    let svd = value(&json(&["norm", "--zeros", "0.1-0.2i,0.4", "--t", "-0.05+0.2i", "--method", "svd"]));
    let pick = value(&json(&["norm", "--zeros", "0.1-0.2i,0.4", "--t", "-0.05+0.2i", "--method", "pick"]));
    assert!((svd - pick).abs() < 1e-8);
}

#[test]
fn range_writes_boundary_csv() {
    let dir = tempfile::tempdir().unwrap();

    let disk = dir.path().join("disk.csv");
    let v = json(&["range", "--zeros", "0,0", "--samples", "32", "--out", disk.to_str().unwrap()]);
    assert!((value(&v) - 0.5).abs() < 1e-14);
    let header = fs::read_to_string(&disk).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "theta,support_value,re,im");
    let rows = read_csv(&disk);
    assert_eq!(rows.len(), 32);
    assert!(rows.iter().all(|r| (r[1] - 0.5).abs() < 1e-14));

    let ellipse = dir.path().join("ellipse.csv");
    let v = json(&["range", "--zeros", "0,0.5", "--samples", "64", "--out", ellipse.to_str().unwrap()]);
    assert!((value(&v) - 0.75).abs() < 1e-12);
    let max_re = read_csv(&ellipse).iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max);
    assert!((max_re - 0.75).abs() < 1e-14);

    let point = dir.path().join("point.csv");
    json(&["range", "--zeros", "0.3-0.4i", "--samples", "8", "--out", point.to_str().unwrap()]);
    for r in read_csv(&point) {
        assert!((r[2] - 0.3).abs() < 1e-15 && (r[3] + 0.4).abs() < 1e-15, "{r:?}");
    }
}

#[test]
fn range_rejects_few_samples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let res = shiftrad(&["range", "--zeros", "0,0", "--samples", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn pick_check_examples() {
    let above = json(&["pick-check", "--zeros", "0,0.5", "--t", "0.1", "--gamma", "1.2"]);
    assert_eq!(above["feasible"], true);
    assert!(above["min_eigenvalue"].as_f64().unwrap() > 0.0);
    assert_eq!(above["matrix"].as_array().unwrap().len(), 2);

    let below = json(&["pick-check", "--zeros", "0,0.5", "--t", "0.1", "--gamma", "1.0"]);
    assert_eq!(below["feasible"], false);
    assert!(below["min_eigenvalue"].as_f64().unwrap() < 0.0);

    let single = json(&["pick-check", "--zeros", "0", "--t", "0.3", "--gamma", "1.0"]);
    assert_eq!(single["feasible"], true);
    assert_eq!(single["min_eigenvalue"].as_f64().unwrap(), 0.0);
}

#[test]
fn pick_check_rejects_repeated_zeros() {
    let res = shiftrad(&["pick-check", "--zeros", "0.5,0.5", "--t", "0.1", "--gamma", "1.2"]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8(res.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn ft_trace_csv() {
    let res = shiftrad(&["ft-trace", "--zeros", "0,0.5", "--t", "0.1"]);
    assert_eq!(res.status.code(), Some(0));
    let text = String::from_utf8(res.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "rho,z1_re,z1_im,z2_re,z2_im,defect_re,defect_im");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 100);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ft.csv");
    let v = json(&["ft-trace", "--zeros", "0,0.5", "--t", "0.1", "--out", out.to_str().unwrap()]);
    assert_eq!(v["rows"].as_u64().unwrap() as usize, rows.len());
    assert!((v["norm"].as_f64().unwrap() - 1.075914).abs() < 1e-6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["numrad", "--zeros", "0.2+0.3i,-0.1,0.5"][..],
        &["norm", "--zeros", "0,0.5,-0.7", "--t", "0.2-0.1i", "--method", "pick"][..],
        &["numrad", "--zeros", "0,0.5", "--json"][..],
    ] {
        assert_eq!(shiftrad(args).stdout, shiftrad(args).stdout);
    }
}

#[test]
fn json_flag_pretty_prints() {
    let compact = shiftrad(&["numrad", "--zeros", "0,0.5"]).stdout;
    let pretty = shiftrad(&["numrad", "--zeros", "0,0.5", "--json"]).stdout;
    assert_eq!(String::from_utf8(compact.clone()).unwrap().lines().count(), 1);
    assert!(String::from_utf8(pretty.clone()).unwrap().lines().count() > 10);
    let a: Value = serde_json::from_slice(&compact).unwrap();
    let b: Value = serde_json::from_slice(&pretty).unwrap();
    assert_eq!(a, b);
}

#[test]
fn auto_decision_table() {
    let table = [
        (1, true, NumradMethod::Closed),
        (4, true, NumradMethod::Closed),
        (5, true, NumradMethod::Roots),
        (12, true, NumradMethod::Roots),
        (1, false, NumradMethod::Oracle),
        (3, false, NumradMethod::Oracle),
        (9, false, NumradMethod::Oracle),
    ];
    for (degree, real, expected) in table {
        assert_eq!(auto_method(degree, real), expected, "degree {degree}, real {real}");
    }
    let v = json(&["numrad", "--zeros", "0,0.1,0.2,0.3,0.4"]);
    assert_eq!(v["method"], "root_method");
}

#[test]
fn exit_codes() {
    let outside = shiftrad(&["numrad", "--zeros", "0,1.5"]);
    assert_eq!(outside.status.code(), Some(2));
    let garbage = shiftrad(&["numrad", "--zeros", "0,abc"]);
    assert_eq!(garbage.status.code(), Some(2));
    let unwritable = shiftrad(&["range", "--zeros", "0", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(unwritable.status.code(), Some(4));
    let missing_config = shiftrad(&["numrad", "--zeros", "0", "--config", "/nonexistent-dir/cfg"]);
    assert_eq!(missing_config.status.code(), Some(4));
}

#[test]
fn config_file_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "theta_samples = 64\ncross_check = false\n").unwrap();
    let v = json(&["numrad", "--zeros", "0,0.5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["config_echo"]["theta_samples"], 64);
    assert_eq!(v["config_echo"]["cross_check"], false);
    assert!(v["cross_checks"].as_object().unwrap().is_empty());

    fs::write(&cfg, "theta_samples = lots\n").unwrap();
    let bad = shiftrad(&["numrad", "--zeros", "0,0.5", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}
