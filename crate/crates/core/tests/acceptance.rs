//! Acceptance run: one line per criterion.
//!
//! Every check reported by a suite must match a tolerance pinned here, so a
//! suite cannot pass by loosening its own limits. Each criterion also has a
//! wall-clock budget.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use elastogreen::verify::{run_suite, write_reports, Check, Suite, SuiteReport, VerifyOptions};

/// `(relation, limits)` pinned for a check name.
fn pinned(suite: Suite, name: &str) -> Option<(&'static str, Vec<f64>)> {
    let r = match suite {
        Suite::HomogeneousLimit if name == "max_relative_gap" => ("<=", vec![1e-10]),
        Suite::InterfaceConditions if name == "displacement_jump" => ("<=", vec![1e-8]),
        Suite::InterfaceConditions if name == "traction_jump" => ("<=", vec![1e-6]),
        Suite::DegenerateTriples | Suite::Factorizations | Suite::Determinism => ("==", vec![1.0]),
        Suite::GapIdentity => ("<=", vec![1e-10]),
        Suite::TransmissionIdentity if name.ends_with("_residual") => ("<=", vec![5e-2]),
        Suite::TransmissionIdentity if name.ends_with("_tail_rate") => ("in", vec![0.7, 1.3]),
        Suite::Blowup if name.ends_with("_slope_deviation") => ("<=", vec![1e-12]),
        Suite::Blowup if name.ends_with("_positive_coefficient") => ("==", vec![1.0]),
        Suite::FdConvergence if name == "kelvin_order_l2" => (">=", vec![1.8]),
        Suite::FdConvergence if name == "flat_order_l2" => (">=", vec![0.8]),
        Suite::FdConvergence if name == "flat_order_far" => (">=", vec![1.8]),
        Suite::Reciprocity => ("<=", vec![3.0]),
        Suite::Metrics if name == "pocket_strict" => ("==", vec![1.0]),
        // limit is two voxel diagonals of the pair's grid
        Suite::Metrics if name.ends_with("_bound") => return Some(("<=", Vec::new())),
        _ => return None,
    };
    Some(r)
}

/// Minimum number of checks per suite.
fn expected_checks(suite: Suite) -> usize {
    match suite {
        Suite::HomogeneousLimit => 1,
        Suite::InterfaceConditions => 2,
        Suite::DegenerateTriples => 6,
        Suite::Factorizations => 4,
        Suite::GapIdentity => 2,
        Suite::TransmissionIdentity => 30,
        Suite::Blowup => 6,
        Suite::FdConvergence => 3,
        Suite::Reciprocity => 1,
        Suite::Metrics => 21,
        Suite::Determinism => 2,
    }
}

fn budget(suite: Suite) -> Duration {
    let secs = match suite {
        Suite::HomogeneousLimit
        | Suite::InterfaceConditions
        | Suite::DegenerateTriples
        | Suite::Factorizations
        | Suite::GapIdentity => 1,
        Suite::TransmissionIdentity | Suite::Reciprocity => 300,
        Suite::Blowup => 10,
        Suite::FdConvergence => 600,
        Suite::Metrics => 60,
        Suite::Determinism => 600,
    };
    Duration::from_secs(secs)
}

fn audit(report: &SuiteReport) -> Vec<String> {
    let mut problems = Vec::new();
    if report.checks.len() < expected_checks(report.suite) {
        problems.push(format!("{} checks, expected at least {}", report.checks.len(), expected_checks(report.suite)));
    }
    for c in &report.checks {
        match pinned(report.suite, &c.name) {
            None => problems.push(format!("unpinned check {}", c.name)),
            Some((rel, lim)) if rel != c.relation || (!lim.is_empty() && lim != c.limit) => {
                problems.push(format!("{} uses {} {:?}, pinned {} {:?}", c.name, c.relation, c.limit, rel, lim))
            }
            _ => {}
        }
        if !c.passed {
            problems.push(failed(c));
        }
    }
    problems
}

fn failed(c: &Check) -> String {
    format!("{} = {:e} violates {} {:?}", c.name, c.value, c.relation, c.limit)
}

/// Fraction of the allowed range used by a check (1 at the limit).
fn usage(c: &Check) -> f64 {
    match (c.relation, c.limit.as_slice()) {
        ("<=", [l]) => c.value / l,
        (">=", [l]) => l / c.value,
        ("in", [lo, hi]) => (2.0 * c.value - lo - hi).abs() / (hi - lo),
        _ => 0.0,
    }
}

fn headline(report: &SuiteReport) -> String {
    let tightest = report.checks.iter().max_by(|a, b| usage(a).total_cmp(&usage(b)));
    let worst = report.checks.iter().find(|c| !c.passed).or(tightest);
    match worst {
        Some(c) if c.relation == "==" => format!("{} checks hold", report.checks.iter().filter(|c| c.passed).count()),
        Some(c) => format!("{} = {:.3e} ({} {:?})", c.name, c.value, c.relation, c.limit),
        None => "no checks".into(),
    }
}

fn same_tree(a: &Path, b: &Path) -> Result<usize, String> {
    let names = |d: &Path| -> Vec<_> {
        let mut v: Vec<_> = std::fs::read_dir(d).unwrap().map(|e| e.unwrap().file_name()).collect();
        v.sort();
        v
    };
    let (na, nb) = (names(a), names(b));
    if na != nb {
        return Err(format!("file lists differ: {na:?} vs {nb:?}"));
    }
    for n in &na {
        if std::fs::read(a.join(n)).unwrap() != std::fs::read(b.join(n)).unwrap() {
            return Err(format!("{n:?} differs"));
        }
    }
    Ok(na.len())
}

fn main() -> ExitCode {
    // `cargo test -- --list` and similar harness probes
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let opts = VerifyOptions::default();
    let mut reports = Vec::new();
    let mut all_ok = true;
    println!("acceptance (seed {})", opts.seed);
    for suite in Suite::ALL {
        let start = Instant::now();
        let result = run_suite(suite, &opts);
        let elapsed = start.elapsed();
        let (ok, detail) = match &result {
            Ok(r) => {
                let mut problems = audit(r);
                if elapsed > budget(suite) {
                    problems.push(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), budget(suite).as_secs()));
                }
                if problems.is_empty() {
                    (true, headline(r))
                } else {
                    (false, problems.join("; "))
                }
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let ok = ok && (suite != Suite::Determinism || repeat_identical(&opts, &reports, &result));
        all_ok &= ok;
        println!(
            "{:>2} {:<22} {}  {:>7.2}s  {}",
            suite.criterion(),
            suite.name(),
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            detail
        );
        if let Ok(r) = result {
            reports.push(r);
        }
    }
    println!("{}", if all_ok { "all criteria passed" } else { "some criteria FAILED" });
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Writes the full report set twice, regenerating it the second time, and
/// compares the two directories byte for byte.
fn repeat_identical(opts: &VerifyOptions, first: &[SuiteReport], det: &Result<SuiteReport, elastogreen::Error>) -> bool {
    let Ok(det) = det else { return false };
    let mut first = first.to_vec();
    first.push(det.clone());
    let second: Result<Vec<_>, _> = Suite::ALL.iter().map(|s| run_suite(*s, opts)).collect();
    let Ok(second) = second else { return false };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_reports(a.path(), opts.seed, &first).unwrap();
    write_reports(b.path(), opts.seed, &second).unwrap();
    match same_tree(a.path(), b.path()) {
        Ok(n) => {
            println!("   repeated full run: {n} artifacts byte-identical");
            true
        }
        Err(e) => {
            println!("   repeated full run differs: {e}");
            false
        }
    }
}
