//! `uinf`: identity checks, reduction scans, monopole solves and algebra tables.
//!
//! Exit status: 0 when every check passes, 1 when a check fails or a solver
//! errors, 2 on invalid configuration or input.

mod cmd;
mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

/// Maps errors raised while computing to exit status 1.
pub fn compute(e: uinf_core::Error) -> Failure {
    Failure::Compute(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "uinf", version, about = "Numerical checks for sphere reductions and BPS monopoles")]
pub struct Cli {
    /// `key = value` file; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized commands (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default `uinf-out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generalized-delta and Levi-Civita identity suites.
    Identities(IdentitiesArgs),
    /// Block-metric reduction checks.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// BPS monopole profiles, energies and perturbations.
    #[command(subcommand)]
    Monopole(MonopoleCommand),
    /// Poisson-bracket algebra on the sphere.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    /// Comma-separated dimensions, 3 to 8.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Spacetime dimension D.
    #[arg(long = "D", visible_alias = "dim")]
    pub d: Option<usize>,
    /// Band limit of the random configurations.
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Amplitude of the random coefficients.
    #[arg(long)]
    pub scale: Option<f64>,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Extra-sphere radius.
    #[arg(long)]
    pub b: Option<f64>,
    /// Reduced coupling e = q/b².
    #[arg(long, conflicts_with = "q")]
    pub e: Option<f64>,
    /// Background flux parameter.
    #[arg(long)]
    pub q: Option<f64>,
    /// Number of random configurations.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TwoDimArgs {
    #[arg(long)]
    pub lmax: Option<usize>,
    #[arg(long)]
    pub scale: Option<f64>,
    /// Background flux parameter at b = 1.
    #[arg(long)]
    pub q: Option<f64>,
    /// Further radii at fixed e.
    #[arg(long = "b-list")]
    pub b_list: Option<String>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub e: Option<f64>,
    /// Strictly decreasing radii.
    #[arg(long = "b-list")]
    pub b_list: Option<String>,
}

#[derive(Args, Debug)]
pub struct BornInfeldArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long = "b-list")]
    pub b_list: Option<String>,
    /// Born-Infeld scale for the b-scan.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Overall constant C.
    #[arg(long)]
    pub c: Option<f64>,
    /// Strictly decreasing α values for the ordering experiment; keep them below q = e b².
    #[arg(long = "alpha-list")]
    pub alpha_list: Option<String>,
    /// Radius of the ordering experiment.
    #[arg(long = "ordering-b")]
    pub ordering_b: Option<f64>,
    /// Field amplitude used to separate odd and even parts.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCommand {
    /// Scalar model at one radius, plus the masslessness check.
    Scalar(PointArgs),
    /// Yang-Mills model at one radius.
    Ym(PointArgs),
    /// Two spacetime dimensions: exact match with no residual terms.
    TwoDim(TwoDimArgs),
    /// Residual-to-covariant ratio along decreasing radii at fixed e.
    ScanB(ScanArgs),
    /// Born-Infeld ratio scan and α-ordering experiment.
    BornInfeld(BornInfeldArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct MonopoleArgs {
    #[arg(long = "xi-max")]
    pub xi_max: Option<f64>,
    #[arg(long = "xi-min")]
    pub xi_min: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub n: Option<usize>,
    /// Linear fraction of the quadratic grid map, in (0, 1].
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub e: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Args, Debug)]
pub struct MonopoleEvbArgs {
    #[command(flatten)]
    pub grid: MonopoleArgs,
    /// evb; ε = (evb)⁴/30.
    #[arg(long)]
    pub evb: Option<f64>,
}

#[derive(Args, Debug)]
pub struct MonopoleEnergyArgs {
    #[command(flatten)]
    pub grid: MonopoleArgs,
    #[arg(long)]
    pub evb: Option<f64>,
    /// Cutoffs at which the integrals are re-evaluated.
    #[arg(long)]
    pub cutoffs: Option<String>,
}

#[derive(Args, Debug)]
pub struct MonopoleScanArgs {
    #[command(flatten)]
    pub grid: MonopoleArgs,
    #[arg(long = "evb-list")]
    pub evb_list: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum MonopoleCommand {
    /// BPS profiles with their first-order corrections.
    Solve(MonopoleEvbArgs),
    /// Energy breakdown and cutoff dependence.
    Energy(MonopoleEnergyArgs),
    /// First-order perturbation and its asymptotic fits.
    Perturb(MonopoleEvbArgs),
    /// ΔE/E₀ against ε.
    ScanEvb(MonopoleScanArgs),
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCommand {
    /// Bracket structure constants up to a band limit.
    StructureConstants {
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// SU(2) closure of the l = 1 generators.
    Su2,
    /// Bracket of two fields given as JSON.
    Bracket {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
}

/// Exit status for one invocation with `args` (program name first).
fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cmd::run(&cli) {
        Ok(passed) => u8::from(!passed),
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("config error: {m}"),
                Failure::Compute(m) => eprintln!("error: {m}"),
            }
            f.code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

#[cfg(test)]
mod tests;
