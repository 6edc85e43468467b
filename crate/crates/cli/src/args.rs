use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use quadid_core::report::Format;

#[derive(Parser, Debug)]
#[command(name = "quadid", version, about = "Numerical verification of angular integral identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate both sides of registered identities over their grids.
    Verify(VerifyArgs),
    /// Elliptic moments from the recursion against quadrature.
    Moments(MomentsArgs),
    /// Compare a sin-product integral with its reduced form.
    Reduce(ReduceArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Output format: json, csv or text.
    #[arg(long)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Add wall time to the report.
    #[arg(long)]
    pub timing: bool,
    /// TOML file with defaults for any flag; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct VerifyArgs {
    /// Every registered identity.
    #[arg(long, conflicts_with = "id")]
    pub all: bool,
    /// Identity ids, e.g. EQ23.
    #[arg(long, num_args = 1..)]
    pub id: Vec<String>,
    /// Replace a grid axis: `x=0.1,1,10`, or `fn=exp_neg,power:2` for test functions.
    #[arg(long, value_name = "AXIS=V1,V2,...")]
    pub grid: Vec<String>,
    /// Override a tolerance class: `standard=1e-9`.
    #[arg(long, value_name = "CLASS=VALUE")]
    pub tol: Vec<String>,
    /// Seed for randomized points and Monte Carlo.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples per Monte Carlo estimate.
    #[arg(long)]
    pub mc_samples: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Default)]
pub struct MomentsArgs {
    /// Largest n in the table (2..=30).
    #[arg(long)]
    pub max_n: Option<u32>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ReduceArgs {
    /// Number of angles (2, 3 or 4).
    #[arg(long)]
    pub n: Option<usize>,
    /// Test function, e.g. exp_neg or power:2.
    #[arg(long = "fn", value_name = "FUNCTION")]
    pub function: Option<String>,
    /// Scale x.
    #[arg(long)]
    pub x: Option<f64>,
    /// Index of the angle carrying the sine weight.
    #[arg(long)]
    pub weight: Option<usize>,
    /// Requested absolute and relative error for both evaluations.
    #[arg(long)]
    pub target: Option<f64>,
    /// Integrand evaluation budget per adaptive integration.
    #[arg(long)]
    pub max_evals: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}
