//! `elastogreen` command-line driver.
//!
//! Exit status: 0 on success, 1 when a verification check fails or a
//! computation errors, 2 on usage or configuration errors.

mod artifacts;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elastogreen::gap_analysis::SampleRange;
use elastogreen::{Error, Vec3};

#[derive(Parser, Debug)]
#[command(name = "elastogreen", version, about = "Elastostatic Green's functions, gap algebra and verification suites")]
pub struct Cli {
    /// Material configuration (JSON). Defaults to host (μ=1, ν=0.3), inclusion (μ=3, ν=0.2).
    #[arg(long, global = true)]
    pub materials: Option<PathBuf>,
    /// Directory for CSV/JSON artifacts.
    #[arg(long, global = true, default_value = "elastogreen-out")]
    pub out: PathBuf,
    /// Seed for randomized suites; recorded in every artifact.
    #[arg(long, global = true, default_value_t = elastogreen::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Kelvin matrix and gradient in the host material.
    EvalKelvin(EvalArgs),
    /// Bonded half-space matrix and gradient.
    EvalBimaterial(BimaterialArgs),
    /// Sample Q2 on a slice and bracket its zeros in s.
    GapScan(GapScanArgs),
    /// Gap entry along the normal as the source approaches the interface.
    Blowup(BlowupArgs),
    /// Half-space transmission identity by quadrature.
    IdentityCheck(IdentityArgs),
    /// Finite-difference transmission oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Hausdorff and modified distances between voxel sets.
    Metrics(MetricsArgs),
    /// Run named verification suites.
    Verify(VerifyArgs),
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    match v[..] {
        [a, b, c] => Ok(Vec3::new(a, b, c)),
        _ => Err(format!("expected x,y,z, got {s:?}")),
    }
}

fn parse_range(s: &str) -> Result<SampleRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub x: Vec3,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub y: Vec3,
}

#[derive(Args, Debug)]
pub struct BimaterialArgs {
    #[command(flatten)]
    pub points: EvalArgs,
    /// Side used for one-sided gradients when x lies on the interface.
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Allow sources in the inclusion by reflecting the configuration.
    #[arg(long)]
    pub reflect: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SideArg {
    Host,
    Inclusion,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CaseArg {
    Zz,
    Xx,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum SliceArg {
    /// ν^I = ν.
    NuEqNui,
    /// Independent ν and ν^I ranges.
    Full,
}

#[derive(Args, Debug)]
pub struct GapScanArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long, value_enum, default_value = "nu-eq-nui")]
    pub slice: SliceArg,
    /// `lo:hi:n` samples of s = μ/μ^I.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0:2:400")]
    pub s: SampleRange,
    /// `lo:hi:n` samples of ν.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2:2:401")]
    pub nu: SampleRange,
    /// `lo:hi:n` samples of ν^I (full slice only).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0:0.49:50")]
    pub nu_i: SampleRange,
}

#[derive(Args, Debug)]
pub struct BlowupArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub axis: u8,
    /// `auto` or a ratio in (0, 1).
    #[arg(long, default_value = "auto")]
    pub lambda_w: String,
    /// `hi:lo` height range.
    #[arg(long, default_value = "1e-1:1e-4")]
    pub h: String,
    #[arg(long, default_value_t = 10)]
    pub per_decade: usize,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    /// Truncation radius.
    #[arg(long, default_value_t = 50.0)]
    pub rho: f64,
    /// Source point y0.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,-1")]
    pub y0: Vec3,
    /// Evaluation point w0.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,-0.75")]
    pub w0: Vec3,
    /// Direction index for l = m = e_i; all three when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub axis: Option<u8>,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Solve a problem described by a JSON spec.
    Solve {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Manufactured-solution convergence study.
    Convergence {
        #[arg(long, value_enum, default_value = "kelvin")]
        kind: ConvergenceKind,
        #[arg(long, value_delimiter = ',', default_value = "17,33,65")]
        grids: Vec<usize>,
    },
    /// Two-solve reciprocity check around a spherical inclusion.
    Reciprocity {
        #[arg(long, default_value_t = 33)]
        grid: usize,
        #[arg(long, default_value_t = 65)]
        reference: usize,
    },
    /// Remainder below a paraboloid interface against distance.
    Probe {
        #[arg(long, default_value_t = 1.0)]
        m0: f64,
        #[arg(long, default_value_t = 65)]
        grid: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ConvergenceKind {
    Kelvin,
    Flat,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// First occupancy array (`.bin` with JSON sidecar).
    #[arg(long, requires = "b")]
    pub a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Random star-shaped pairs.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    /// Include the sealed-pocket example.
    #[arg(long)]
    pub pocket: bool,
    #[arg(long, default_value_t = 41)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name; repeatable.
    #[arg(long, conflicts_with = "all")]
    pub suite: Vec<String>,
    #[arg(long)]
    pub all: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ConfigParse(_)
        | Error::Io(_)
        | Error::InvalidApriori(_)
        | Error::OutOfBounds(_)
        | Error::PoissonOutOfRange(_)
        | Error::NotStronglyConvex { .. }
        | Error::JumpTooSmall { .. }
        | Error::InvalidQuadrature(_)
        | Error::GridTooCoarse(_)
        | Error::GridMismatch => 2,
        _ => 1,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("ELAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| Error::ConfigParse(format!("ELAB_THREADS={v:?} is not a count")))?;
    if n == 0 {
        return Err(Error::ConfigParse("ELAB_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::ConfigParse(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| commands::run(&cli));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
