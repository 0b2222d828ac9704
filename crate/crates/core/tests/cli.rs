use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dual-schur")).args(args).output().unwrap()
}

fn write_config(dir: &Path, v: &Value) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn constant_spec(alpha: f64, c: f64, n: usize) -> Value {
    json!({
        "f": { "family": "constant", "value": alpha },
        "g": { "family": "constant", "value": 1.0 },
        "c": c,
        "n": n,
        "k": (c * n as f64).round() as usize,
    })
}

#[test]
fn limit_shape_support_for_constant_density() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &json!({ "spec": constant_spec(1.0, 4.0, 10) }));
    let out = dir.path().join("out");
    let o = bin(&["limit-shape", "--config", &cfg, "--out", out.to_str().unwrap(), "--step", "0.05"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sup: Value = serde_json::from_str(&std::fs::read_to_string(out.join("support.json")).unwrap()).unwrap();
    assert!((sup["x_minus"].as_f64().unwrap() + 0.5).abs() < 1e-10, "{sup}");
    assert!((sup["x_plus"].as_f64().unwrap() - 3.5).abs() < 1e-10, "{sup}");
    let curve = std::fs::read_to_string(out.join("curve.csv")).unwrap();
    assert!(curve.starts_with("# dual-schur "));
    assert!(out.join("manifest.json").exists());
}

#[test]
fn critical_theory_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &json!({ "spec": constant_spec(1.0, 1.0, 20), "seed": 3 }));
    let out = dir.path().join("out");
    let o = bin(&["critical", "--config", &cfg, "--out", out.to_str().unwrap(), "--delta", "2", "--count", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("gaps.csv")).unwrap();
    let mut lines = text.lines().skip(2);
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    let theory: f64 = row[1].parse().unwrap();
    assert!((theory - 0.0908).abs() < 1e-4, "{theory}");
    assert!(lines.next().is_none());
}

#[test]
fn invalid_config_exits_with_config_status() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &json!({ "spec": constant_spec(1.0, -1.0, 10) }));
    let out = dir.path().join("out");
    let o = bin(&["limit-shape", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    let o = bin(&["limit-shape", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write_config(dir.path(), &json!({ "spec": constant_spec(1.0, 1.0, 10), "extra": 1 }));
    assert_eq!(bin(&["sample", "--config", &bad, "--out", out.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn manifest_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &json!({ "spec": constant_spec(1.0, 1.0, 6), "seed": 41, "sample": { "count": 300, "statistic": "first_row" } }),
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(bin(&["sample", "--config", &cfg, "--out", a.to_str().unwrap(), "--seed", "5"]).status.success());
    let manifest = a.join("manifest.json");
    assert!(bin(&["sample", "--config", manifest.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.success());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["config"]["seed"], 5);
    for f in m["outputs"].as_array().unwrap() {
        let f = f.as_str().unwrap();
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn tw_table_command() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &json!({ "spec": constant_spec(1.0, 2.0, 10), "tw_table": { "from": -2.0, "to": 2.0, "step": 0.5 } }),
    );
    let out = dir.path().join("out");
    assert!(bin(&["tw-table", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(out.join("tw_table.csv")).unwrap();
    let rows: Vec<Vec<f64>> =
        text.lines().skip(2).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    let zero = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((zero[1] - 0.969_372_828_355).abs() < 1e-9);
}
