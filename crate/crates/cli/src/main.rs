use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;

/// Balancing-weight treatment effect estimation for trials augmented with
/// external controls.
#[derive(Debug, Parser)]
#[command(name = "ecbalance", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit the source propensity and estimate ATI / ATT / ATO.
    Estimate(EstimateArgs),
    /// Covariate balance tables and weighted densities.
    Diagnose(DiagnoseArgs),
    /// Replicate the simulation study and summarize bias and MSE.
    Simulate(SimulateArgs),
    /// Monte Carlo true estimands for the tabulated scenarios.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// CSV file with one row per subject.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "y")]
    pub y_col: String,
    #[arg(long, default_value = "a")]
    pub a_col: String,
    #[arg(long, default_value = "z")]
    pub z_col: String,
    /// Comma-separated covariate columns; default is every other column.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Option<Vec<String>>,
    /// Column holding known propensities `Pr(Z = 1 | X)`; skips the fit.
    #[arg(long)]
    pub pi_column: Option<String>,
    /// Ridge penalty for the propensity fit (0 disables).
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    /// Add pairwise covariate interactions to the propensity model.
    #[arg(long)]
    pub ps_interactions: bool,
    /// Add squares of non-binary covariates to the propensity model.
    #[arg(long)]
    pub ps_squares: bool,
    /// `all` or a comma-separated subset of ati, att, ato.
    #[arg(long, default_value = "all")]
    pub estimand: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// JSON report; printed to stdout when no output is given.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// CSV table with one row per estimand.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Propensity histogram by source, 20 bins on [0, 1].
    #[arg(long)]
    pub histogram: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Kde,
    Hist,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Balance table CSV; printed to stdout when omitted.
    #[arg(long)]
    pub balance: Option<PathBuf>,
    /// Weighted density CSV for every covariate and estimand.
    #[arg(long)]
    pub density: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DensityKind::Kde)]
    pub density_method: DensityKind,
    /// Grid points for the kernel estimate.
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    /// Bins for the histogram estimate.
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Setting ids, e.g. `1-9` or `1,3,5`.
    #[arg(long, default_value = "1-18")]
    pub settings: String,
    /// External-control law ids, e.g. `1-8`.
    #[arg(long, default_value = "1-8")]
    pub ecs: String,
    /// Replicates per scenario.
    #[arg(long, default_value_t = 200)]
    pub b: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Metrics CSV, one row per scenario and estimand.
    #[arg(long)]
    pub out: PathBuf,
    /// Precomputed true estimands (output of `oracle`); computed when absent.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    /// Long-format bias / MSE table for plotting.
    #[arg(long)]
    pub figure_data: Option<PathBuf>,
    /// Monte Carlo RCT draws when the oracle is computed here.
    #[arg(long, default_value_t = 1_000_000)]
    pub n_mc: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value = "1-18")]
    pub settings: String,
    #[arg(long, default_value = "1-8")]
    pub ecs: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_mc: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Mixture proportion replacing each scenario's own RCT share.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Output CSV; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> ecbalance::Result<()> {
    let Ok(value) = std::env::var("ECBALANCE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ecbalance::Error::InvalidArgument(format!("ECBALANCE_THREADS={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ecbalance::Error::InvalidArgument(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Estimate(args) => commands::estimate(&args),
        Command::Diagnose(args) => commands::diagnose(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Oracle(args) => commands::oracle(&args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
