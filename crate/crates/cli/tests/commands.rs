use std::path::Path;
use std::process::{Command, Output};

use qwalk::output;
use tempfile::TempDir;

const HADAMARD: &str = "0.7853981633974483";

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("spawn qwalk")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn run_in(dir: &TempDir, cmd: &str, config: &str) -> Output {
    let cfg = write_config(dir.path(), config);
    let out = dir.path().join("out").display().to_string();
    qwalk(&[cmd, "--config", &cfg, "--out", &out])
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_hadamard_first_step() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "simulate",
        &format!(r#"{{"coin": {{"theta": {HADAMARD}}}, "phi": [[1,0],[0,0],[0,0],[0,0]], "n_max": 3, "snapshots": [1, 3]}}"#),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    let rows = output::read_distribution(&out.join("distribution_n1.csv"), 1).unwrap();
    assert_eq!(rows.len(), 4);
    for (_, _, p) in rows {
        assert!((p - 0.25).abs() < 1e-15);
    }
    let amps = output::read_amplitudes(&out.join("amplitudes_n3.csv"), 3).unwrap();
    // parity sites with |x| + |y| ≤ 3 and x + y odd
    assert_eq!(amps.len(), 16);
    assert_eq!(output::read_norm_log(&out.join("norm_log.csv")).unwrap().len(), 3);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("amplitudes_n3.json")).unwrap()).unwrap();
    assert_eq!(meta["n"], 3);
}

#[test]
fn simulate_is_deterministic() {
    let cfg = r#"{"coin": {"theta": 1.0471975511965976}, "phi": [[0.5,0],[0,0.5],[0.5,0],[-0.5,0]], "n_max": 20, "snapshots": [20]}"#;
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert!(run_in(&a, "simulate", cfg).status.success());
    assert!(run_in(&b, "simulate", cfg).status.success());
    for f in ["distribution_n20.csv", "amplitudes_n20.csv", "amplitudes_n20.json", "norm_log.csv"] {
        let x = std::fs::read(a.path().join("out").join(f)).unwrap();
        let y = std::fs::read(b.path().join("out").join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn unnormalized_phi_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "simulate",
        r#"{"coin": {"theta": 0.5}, "phi": [[1,0],[1,0],[1,0],[1,0]], "n_max": 2}"#,
    );
    assert_eq!(o.status.code(), Some(2));
    let msg = stderr(&o);
    assert!(msg.contains("phi") && msg.contains("normalized"), "{msg}");
}

#[test]
fn config_errors_exit_2_with_position() {
    let dir = TempDir::new().unwrap();
    let o = run_in(&dir, "entropy-series", "{\n\"coin\": {\"theta\": 0.5},\n\"phi\": [1, 2\n}");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = qwalk(&["simulate", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qwalk(&["simulate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn memory_cap_exits_3() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "simulate",
        r#"{"coin": {"theta": 0.5}, "phi": [[1,0],[0,0],[0,0],[0,0]], "n_max": 4096, "memory_cap_bytes": 1000000}"#,
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = run_in(
        &dir,
        "entropy-series",
        r#"{"coin": {"theta": 0.5}, "phi": [[1,0],[0,0],[0,0],[0,0]], "n_max": 4096, "memory_cap_bytes": 1000000}"#,
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn entropy_series_hadamard() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "entropy-series",
        &format!(r#"{{"coin": {{"theta": {HADAMARD}}}, "phi": [[1,0],[0,0],[0,0],[0,0]], "n_max": 40}}"#),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = output::read_entropy_series(&dir.path().join("out/entropy_series.csv")).unwrap();
    assert_eq!(rows.len(), 40);
    assert!((rows[0].s_c - 2.0).abs() < 1e-12);
    assert!((rows[0].s_shannon - 2.0).abs() < 1e-12);
    assert!((rows[1].s_shannon - 3.0).abs() < 1e-12);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r.n, k + 1);
        assert!(r.s_c >= 0.0 && r.s_c <= 2.0);
    }
}

#[test]
fn nmax_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"coin": {"theta": 0.4}, "phi": [[1,0],[0,0],[0,0],[0,0]], "n_max": 500}"#,
    );
    let out = dir.path().join("out").display().to_string();
    let o = qwalk(&["entropy-series", "--config", &cfg, "--out", &out, "--nmax", "7", "--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = output::read_entropy_series(&dir.path().join("out/entropy_series.csv")).unwrap();
    assert_eq!(rows.len(), 7);
}

fn limits_config(coin: &str, phi: &str) -> String {
    format!(r#"{{"coin": {coin}, "phi": {phi}, "n_max": 64, "quadrature_n": 32, "fit_min": 16}}"#)
}

#[test]
fn limits_hadamard_report() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "limits",
        &limits_config(&format!(r#"{{"theta": {HADAMARD}}}"#), "[[1,0],[0,0],[0,0],[0,0]]"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("limit_report.json")).unwrap()).unwrap();
    let sum: f64 = report["overlaps_quadrature"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((sum - 1.0).abs() < 1e-6);
    for f in ["plot_sc.dat", "plot_shannon_ratio.dat", "plot.gp", "entropy_series.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let ratio = std::fs::read_to_string(out.join("plot_shannon_ratio.dat")).unwrap();
    assert_eq!(ratio.lines().count(), 1 + 60);
}

#[test]
fn limits_pi_over_3_populates_both_paths() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        &dir,
        "limits",
        &limits_config(r#"{"theta": 1.0471975511965976}"#, "[[0.5,0],[0,0.5],[0.5,0],[-0.5,0]]"),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/limit_report.json")).unwrap(),
    )
    .unwrap();
    for key in [
        "overlaps_quadrature",
        "overlaps_empirical",
        "cross_overlaps_empirical",
        "cross_overlaps_quadrature",
    ] {
        assert!(!report[key].as_array().unwrap().is_empty(), "{key}");
    }
    assert!(report["s_limit_density"].is_f64());
    assert!(report["s_limit_empirical"].is_f64());
    assert!(!report["discrepancies"].as_array().unwrap().is_empty());
}

#[test]
fn limits_identity_coin_exits_4() {
    let dir = TempDir::new().unwrap();
    let o = run_in(&dir, "limits", &limits_config(r#"{"a": [1,0], "b": [0,0], "delta": [1,0]}"#, "[[1,0],[0,0],[0,0],[0,0]]"));
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("abcd != 0"), "{}", stderr(&o));
}

#[test]
fn baseline_rows_and_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().display().to_string();
    let o = qwalk(&["baseline", "--nmax", "65536", "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = output::read_baseline(&dir.path().join("baseline.csv")).unwrap();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0].n, 16);
    assert_eq!(rows[12].n, 65536);
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("baseline_summary.json")).unwrap(),
    )
    .unwrap();
    assert!((summary["reference_constant"].as_f64().unwrap() - 2.0471).abs() < 1e-4);
    assert!(summary["measured_bracket"].is_f64());
    let o = qwalk(&["baseline", "--nmax", "10", "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_check_passes() {
    let o = qwalk(&["oracle-check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("max deviation"));
}
