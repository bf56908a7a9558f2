use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elastogreen"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_owned).collect()).collect();
    (header, rows)
}

#[test]
fn homogeneous_limit_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--suite", "homogeneous-limit"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("homogeneous-limit.json"));
    assert_eq!(report["passed"], true);
    assert!(report["data"]["max"].as_f64().unwrap() <= 1e-10);
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["suites"].as_array().unwrap().len(), 1);
    assert_eq!(summary["seed"], 20240607);
}

#[test]
fn gap_scan_on_equal_poisson_slice() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gap-scan", "--case", "zz", "--slice", "nu-eq-nui", "--s", "0:2:400"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&dir.path().join("gap_scan_zz.csv"));
    assert_eq!(header, ["case", "nu", "nu_i", "s", "q2"]);
    assert_eq!(rows.len(), 401 * 400);
    assert!(rows.iter().all(|r| r[1] == r[2]));
    let (_, crossings) = csv_rows(&dir.path().join("gap_scan_zz_crossings.csv"));
    // besides the s = 1 line the curve has a branch away from s = 1
    let off: Vec<f64> = crossings.iter().map(|r| r[3].parse().unwrap()).filter(|s: &f64| (s - 1.0).abs() > 1e-6).collect();
    assert!(!off.is_empty());
    let meta = json(&dir.path().join("gap_scan_zz.meta.json"));
    assert_eq!(meta["seed"], 20240607);
    assert_eq!(meta["rows"], 160400);
    assert!(dir.path().join("gap_scan_zz.gp").exists());
}

#[test]
fn blowup_csv_has_unit_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["blowup", "--axis", "3", "--lambda-w", "auto", "--h", "1e-1:1e-4"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = csv_rows(&dir.path().join("blowup_axis3.csv"));
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[0].parse::<f64>().unwrap().ln(), r[1].parse::<f64>().unwrap().ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    assert!((sxy / sxx + 1.0).abs() < 1e-12, "{}", sxy / sxx);
    assert!(rows.len() >= 30);
}

#[test]
fn eval_kelvin_prints_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["eval-kelvin", "--x", "1,0,0", "--y", "0,0,-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = &v["result"]["matrix"];
    // symmetric, with the x1-x3 coupling of a source at 45 degrees
    assert_eq!(m[0][2], m[2][0]);
    assert!(m[0][2].as_f64().unwrap() > 0.0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("e0") || String::from_utf8_lossy(&out.stdout).contains("e-"));
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["blowup", "--axis", "4"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"host": {"mu": 1.0}, "inclusion": {"mu": 2.0, "nu": 0.2}}"#).unwrap();
    let out = run(dir.path(), &["--materials", cfg.to_str().unwrap(), "eval-kelvin", "--x", "1,0,0", "--y", "0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
}

#[test]
fn coincident_points_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["eval-kelvin", "--x", "0,0,-1", "--y", "0,0,-1"]).status.code(), Some(1));
}

#[test]
fn cheap_suites_repeat_byte_identically_across_thread_counts() {
    let suites = ["--suite", "interface-conditions", "--suite", "degenerate-triples", "--suite", "gap-identity", "--suite", "metrics"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut args = vec!["verify"];
    args.extend(suites);
    assert_eq!(run(a.path(), &args).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_elastogreen"))
        .env("ELAB_THREADS", "1")
        .args(&args)
        .arg("--out")
        .arg(b.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 7);
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn oracle_solve_writes_field_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("problem.json");
    std::fs::write(
        &spec,
        r#"{
            "grid": {"n": 11, "lo": -1.0, "hi": 1.0},
            "materials": {"host": {"mu": 1.0, "nu": 0.3}, "inclusion": {"mu": 3.0, "nu": 0.2}},
            "interface": {"kind": "half_space"},
            "boundary": {"kind": "gamma_plus", "source": [0.1, 0.2, -2.0], "direction": [0, 0, 1]}
        }"#,
    )
    .unwrap();
    let out = run(dir.path(), &["--seed", "9", "oracle", "solve", "--problem", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::metadata(dir.path().join("solution.bin")).unwrap().len(), 11 * 11 * 11 * 3 * 8);
    let side = json(&dir.path().join("solution.json"));
    assert_eq!(side["seed"], 9);
    assert_eq!(side["shape"], serde_json::json!([11, 11, 11]));
    let stats = json(&dir.path().join("solve_stats.json"));
    assert!(stats["result"]["relative_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn metrics_pocket_is_strict() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["metrics", "--pocket", "--random", "2", "--grid", "31"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("metrics.csv"));
    assert_eq!(header, ["pair", "hausdorff", "modified", "ratio"]);
    let pocket = rows.iter().find(|r| r[0] == "pocket").unwrap();
    assert!(pocket[2].parse::<f64>().unwrap() < pocket[1].parse::<f64>().unwrap());
    assert_eq!(rows.len(), 3);
}
