use std::f64::consts::PI;
use std::fs;

use cluster_core::evolution::sample_count;
use cluster_core::experiment::{emit_csv, run_all, run_scenario, ExperimentConfig};
use cluster_core::Error;

fn config_in(dir: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig { output_dir: dir.to_path_buf(), ..Default::default() }
}

fn csv_rows(path: &std::path::Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    lines
        .map(|l| {
            let (t, v) = l.split_once(',').unwrap();
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn run_all_count_contract() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig { kappa: 5.5, ..config_in(dir.path()) };
    let report = run_all(&config).unwrap();
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    let labels: Vec<&str> = report.results.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["ideal", "t1", "t2", "combined", "coherence"]);
    assert_eq!(report.csv_paths().len(), 6);
    let csvs = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 6);
    assert!(report.summary_path.exists());

    let expected_rows = sample_count(config.t_end, config.dt, config.sample_every) + 1;
    for label in ["ideal", "t1", "t2", "combined"] {
        let r = report.get(label).unwrap();
        assert_eq!(csv_rows(&r.csv_paths[0]).len(), expected_rows, "{label}");
        assert!(!r.partial);
    }
}

#[test]
fn two_qubit_run_all_completes() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig { n_qubits: 2, t_end: 6.0 * PI, ..config_in(dir.path()) };
    let report = run_all(&config).unwrap();
    assert!(report.failures.is_empty());
    assert_eq!(report.results.len(), 5);
    let peaks = report.get("ideal").unwrap().peaks.clone().unwrap();
    assert_eq!(peaks.len(), 3);
    for (k, t) in peaks.peak_times.iter().enumerate() {
        assert!((t - (2 * k + 1) as f64 * PI).abs() < 1e-6);
        assert!(peaks.peak_values[k] >= 1.0 - 1e-9);
    }
}

#[test]
fn zero_dt_rejected_before_any_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = ExperimentConfig { dt: 0.0, output_dir: out.clone(), ..Default::default() };
    assert!(matches!(run_all(&config), Err(Error::Config(_))));
    assert!(matches!(run_scenario(&config, "ideal"), Err(Error::Config(_))));
    assert!(!out.exists());
}

#[test]
fn ideal_row_at_pi_on_aligned_grid() {
    // dt·sample_every = π/100 puts a sample exactly at π.
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig { dt: PI / 1000.0, t_end: 2.0 * PI, ..config_in(dir.path()) };
    let r = run_scenario(&config, "ideal").unwrap();
    let rows = csv_rows(&r.csv_paths[0]);
    let (t, v) = rows.iter().copied().min_by(|a, b| (a.0 - PI).abs().total_cmp(&(b.0 - PI).abs())).unwrap();
    assert!((t - PI).abs() < 1e-12);
    assert!(v >= 1.0 - 1e-9, "F(π) = {v}");
}

#[test]
fn csv_written_and_rewritten_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let t = [0.0, 0.01, 0.02];
    let v = [0.0625, 0.5, 1.0 / 3.0];
    emit_csv(&path, &t, &v).unwrap();
    let first = fs::read(&path).unwrap();
    emit_csv(&path, &t, &v).unwrap();
    assert_eq!(first, fs::read(&path).unwrap());
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 4);
    assert!(emit_csv(&dir.path().join("missing/dir/x.csv"), &t, &v).is_err());
}

#[test]
fn coherence_series_start_at_pi() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig { n_qubits: 2, kappa: 10.0, emit_svg: true, ..config_in(dir.path()) };
    let r = run_scenario(&config, "coherence").unwrap();
    assert_eq!(r.csv_paths.len(), 2);
    for path in &r.csv_paths {
        let rows = csv_rows(path);
        assert!((rows[0].0 - PI).abs() < 1e-15);
        assert_eq!(rows[0].1, 1.0);
        assert_eq!(rows.len(), 3001);
    }
    let svg = fs::read_to_string(r.svg_path.unwrap()).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}
