//! Subcommand implementations. Each returns `Ok(true)` when every check it
//! performs passes.

use elastogreen::bimaterial::{BimaterialGreen, Side};
use elastogreen::config::MaterialConfig;
use elastogreen::dataset::ScanDataset;
use elastogreen::fd_oracle::io::{write_field, ProblemSpec};
use elastogreen::fd_oracle::studies::{
    asymptotics_probe, flat_interface_convergence, kelvin_convergence, reciprocity, AsymptoticsSetup, ConvergenceSetup,
    ReciprocitySetup,
};
use elastogreen::fd_oracle::{numeric_green, solve_transmission};
use elastogreen::gap_analysis::{blowup_profile, log_heights, select_lambda_w, zero_locus_scan, GapCase, NuISampling, ScanGrid};
use elastogreen::geometry::{metric_report, metrics_dataset, pocket_example, random_shape_pairs, VoxelSet};
use elastogreen::identities::{verify_transmission_identity, HalfSpaceQuadrature};
use elastogreen::kelvin::kelvin;
use elastogreen::materials::MaterialPair;
use elastogreen::numfmt::Sig17;
use elastogreen::verify::{self, Suite, VerifyOptions};
use elastogreen::{Error, Grad3, Result, Vec3};
use serde::Serialize;

use crate::artifacts::{rows, vector, Artifacts};
use crate::{
    BimaterialArgs, BlowupArgs, CaseArg, Cli, Command, ConvergenceKind, EvalArgs, GapScanArgs, IdentityArgs, MetricsArgs,
    OracleCommand, SideArg, SliceArg, VerifyArgs,
};

fn load_pair(cli: &Cli) -> Result<MaterialPair> {
    match &cli.materials {
        Some(p) => MaterialConfig::from_path(p)?.pair_allowing_homogeneous(),
        None => Ok(verify::reference_pair()),
    }
}

pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::EvalKelvin(a) => eval_kelvin(cli, a),
        Command::EvalBimaterial(a) => eval_bimaterial(cli, a),
        Command::GapScan(a) => gap_scan(cli, a),
        Command::Blowup(a) => blowup(cli, a),
        Command::IdentityCheck(a) => identity_check(cli, a),
        Command::Oracle(c) => oracle(cli, c),
        Command::Metrics(a) => metrics(cli, a),
        Command::Verify(a) => run_verify(cli, a),
    }
}

#[derive(Serialize)]
struct Evaluation {
    x: [Sig17; 3],
    y: [Sig17; 3],
    matrix: [[Sig17; 3]; 3],
    /// `gradient[k][i][j] = ∂_k G_ij`.
    gradient: [[[Sig17; 3]; 3]; 3],
}

fn evaluation(args: &EvalArgs, m: &elastogreen::Mat3, g: &Grad3) -> Evaluation {
    Evaluation { x: vector(&args.x), y: vector(&args.y), matrix: rows(m), gradient: std::array::from_fn(|k| rows(&g[k])) }
}

fn eval_kelvin(cli: &Cli, a: &EvalArgs) -> Result<bool> {
    let pair = load_pair(cli)?;
    let e = kelvin(&a.x, &a.y, &pair.host)?;
    let out = Artifacts::new(&cli.out, cli.seed, "eval-kelvin")?;
    print!("{}", out.json("eval_kelvin.json", &evaluation(a, &e.matrix, &e.gradient))?);
    Ok(true)
}

fn eval_bimaterial(cli: &Cli, a: &BimaterialArgs) -> Result<bool> {
    let mut green = BimaterialGreen::new(load_pair(cli)?);
    if a.reflect {
        green = green.with_reflected_sources();
    }
    let side = a.side.map(|s| match s {
        SideArg::Host => Side::Host,
        SideArg::Inclusion => Side::Inclusion,
    });
    let e = green.evaluate(&a.points.x, &a.points.y, side)?;
    let out = Artifacts::new(&cli.out, cli.seed, "eval-bimaterial")?;
    print!("{}", out.json("eval_bimaterial.json", &evaluation(&a.points, &e.matrix, &e.gradient))?);
    Ok(true)
}

fn plot_script(samples: &str, crossings: &str, case: &str) -> String {
    format!(
        "# gnuplot script; columns: case,nu,nu_i,s,q2\n\
         set datafile separator ','\n\
         set key off\n\
         set xlabel 'nu'\n\
         set ylabel 's'\n\
         set title 'Q2 = 0, case {case}'\n\
         plot '{crossings}' using 2:4 every ::1 with points pt 7 ps 0.3\n\
         # samples: '{samples}'\n"
    )
}

fn gap_scan(cli: &Cli, a: &GapScanArgs) -> Result<bool> {
    let case = match a.case {
        CaseArg::Zz => GapCase::Zz,
        CaseArg::Xx => GapCase::Xx,
    };
    let grid = ScanGrid {
        nu: a.nu,
        nu_i: if a.slice == SliceArg::NuEqNui { NuISampling::EqualNu } else { NuISampling::Range(a.nu_i) },
        s: a.s,
    };
    let scan = zero_locus_scan(case, &grid);
    let out = Artifacts::new(&cli.out, cli.seed, "gap-scan")?;
    let stem = format!("gap_scan_{}", case.as_str());
    let samples = out.csv(&stem, &scan.samples, &grid)?;
    let crossings = out.csv(&format!("{stem}_crossings"), &scan.crossings, &grid)?;
    let name = |p: &std::path::Path| p.file_name().unwrap().to_string_lossy().into_owned();
    out.text(&format!("{stem}.gp"), &plot_script(&name(&samples), &name(&crossings), case.as_str()))?;
    println!("{} samples, {} zero crossings -> {}", scan.samples.len(), scan.crossings.len(), samples.display());
    Ok(true)
}

fn parse_heights(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::ConfigParse(format!("expected hi:lo heights, got {s:?}"));
    let (hi, lo) = s.split_once(':').ok_or_else(bad)?;
    let (hi, lo): (f64, f64) = (hi.trim().parse().map_err(|_| bad())?, lo.trim().parse().map_err(|_| bad())?);
    if !(hi > lo && lo > 0.0) {
        return Err(Error::OutOfBounds(format!("heights need hi > lo > 0, got {hi}:{lo}")));
    }
    Ok((hi, lo))
}

#[derive(Serialize)]
struct BlowupSummary {
    axis: usize,
    lambda_w: Sig17,
    selection: Option<elastogreen::gap_analysis::LambdaChoice>,
    slope: Sig17,
    heights: usize,
}

fn blowup(cli: &Cli, a: &BlowupArgs) -> Result<bool> {
    let pair = load_pair(cli)?;
    let axis = a.axis as usize;
    let (lambda_w, selection) = if a.lambda_w == "auto" {
        let c = select_lambda_w(&pair, axis)?;
        (c.lambda_w, Some(c))
    } else {
        let v: f64 = a.lambda_w.parse().map_err(|_| Error::ConfigParse(format!("--lambda-w {:?}", a.lambda_w)))?;
        (v, None)
    };
    let (hi, lo) = parse_heights(&a.h)?;
    let prof = blowup_profile(&pair, axis, lambda_w, &log_heights(hi, lo, a.per_decade))?;
    let out = Artifacts::new(&cli.out, cli.seed, "blowup")?;
    let summary = BlowupSummary { axis, lambda_w: Sig17(lambda_w), selection, slope: Sig17(prof.slope()), heights: prof.rows.len() };
    out.csv(&format!("blowup_axis{axis}"), &prof.to_dataset(), &summary)?;
    print!("{}", out.json(&format!("blowup_axis{axis}.json"), &summary)?);
    Ok(true)
}

fn identity_check(cli: &Cli, a: &IdentityArgs) -> Result<bool> {
    let pair = load_pair(cli)?;
    let quad = HalfSpaceQuadrature::with_rho(a.rho);
    let axes: Vec<usize> = match a.axis {
        Some(i) => vec![i as usize - 1],
        None => (0..3).collect(),
    };
    let reports = axes
        .iter()
        .map(|&i| {
            let e = Vec3::ith(i, 1.0);
            verify_transmission_identity(&a.y0, &a.w0, &e, &e, &pair, &quad)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = Artifacts::new(&cli.out, cli.seed, "identity-check")?;
    print!("{}", out.json("identity_check.json", &reports)?);
    Ok(true)
}

fn oracle(cli: &Cli, c: &OracleCommand) -> Result<bool> {
    match c {
        OracleCommand::Solve { problem } => {
            let spec = ProblemSpec::from_path(problem)?;
            let p = spec.build()?;
            let out = Artifacts::new(&cli.out, cli.seed, "oracle solve")?;
            let (field, stats) = match spec.source {
                Some(s) => {
                    let g = numeric_green(&p, &s.position, &s.direction, s.reference)?;
                    (g.remainder, g.stats)
                }
                None => {
                    let s = solve_transmission(&p)?;
                    (s.field, s.stats)
                }
            };
            let what = if spec.source.is_some() { "remainder of the numeric Green's function" } else { "displacement" };
            write_field(&out.path("solution.bin"), &field, Some(cli.seed), what)?;
            print!("{}", out.json("solve_stats.json", &stats)?);
            Ok(true)
        }
        OracleCommand::Convergence { kind, grids } => {
            let pair = load_pair(cli)?;
            let setup = ConvergenceSetup::default();
            let study = match kind {
                ConvergenceKind::Kelvin => kelvin_convergence(&pair, grids, &setup)?,
                ConvergenceKind::Flat => flat_interface_convergence(&pair, grids, &setup)?,
            };
            let out = Artifacts::new(&cli.out, cli.seed, "oracle convergence")?;
            out.csv(&format!("convergence_{}", study.name), &study.to_dataset(), &setup)?;
            print!("{}", out.json(&format!("convergence_{}.json", study.name), &study)?);
            Ok(true)
        }
        OracleCommand::Reciprocity { grid, reference } => {
            let setup = ReciprocitySetup { grid_n: *grid, reference_n: *reference, ..Default::default() };
            let r = reciprocity(&load_pair(cli)?, &setup)?;
            let out = Artifacts::new(&cli.out, cli.seed, "oracle reciprocity")?;
            print!("{}", out.json("reciprocity.json", &r)?);
            Ok(true)
        }
        OracleCommand::Probe { m0, grid } => {
            let setup = AsymptoticsSetup::paraboloid_on(*m0, *grid);
            let probe = asymptotics_probe(&load_pair(cli)?, &setup)?;
            let out = Artifacts::new(&cli.out, cli.seed, "oracle probe")?;
            out.csv("asymptotics", &probe.to_dataset(), &setup)?;
            print!("{}", out.json("asymptotics.json", &probe)?);
            Ok(true)
        }
    }
}

fn metrics(cli: &Cli, a: &MetricsArgs) -> Result<bool> {
    let mut reports = Vec::new();
    if let (Some(pa), Some(pb)) = (&a.a, &a.b) {
        reports.push(metric_report("input", &VoxelSet::read(pa)?, &VoxelSet::read(pb)?)?);
    }
    for (k, (d1, d2)) in random_shape_pairs(cli.seed, a.random, a.grid)?.iter().enumerate() {
        reports.push(metric_report(&format!("random{k:02}"), d1, d2)?);
    }
    if a.pocket {
        let (d1, d2) = pocket_example(61)?;
        reports.push(metric_report("pocket", &d1, &d2)?);
    }
    if reports.is_empty() {
        return Err(Error::ConfigParse("nothing to compare: give --a/--b, --random or --pocket".into()));
    }
    let out = Artifacts::new(&cli.out, cli.seed, "metrics")?;
    let data: ScanDataset = metrics_dataset(&reports);
    out.csv("metrics", &data, &a.grid)?;
    print!("{}", out.json("metrics.json", &reports)?);
    Ok(true)
}

fn run_verify(cli: &Cli, a: &VerifyArgs) -> Result<bool> {
    let suites: Vec<Suite> = if a.all || a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let mut opts = VerifyOptions { seed: cli.seed, ..Default::default() };
    if cli.materials.is_some() {
        opts.oracle_pair = load_pair(cli)?;
    }
    let mut reports = Vec::new();
    for s in suites {
        let r = verify::run_suite(s, &opts)?;
        println!("[{}] {:>2} {}", if r.passed { "PASS" } else { "FAIL" }, r.criterion, r.suite);
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("       {} = {} (limit {} {:?})", c.name, c.value, c.relation, c.limit);
        }
        reports.push(r);
    }
    let summary = verify::write_reports(&cli.out, cli.seed, &reports)?;
    Ok(summary.passed)
}
