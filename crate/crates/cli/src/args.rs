use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "unifrechet",
    version,
    about = "Unit-Fréchet distribution toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Fit UF, Beta and Kumaraswamy models to a sample and compare them
    Fit(FitArgs),
    /// Draw a UF sample, or bivariate pairs with their ratio
    Sample(SampleArgs),
    /// Run a Monte Carlo study of the UF estimator
    Simulate(SimulateArgs),
    /// UF quantile function
    Quantile(QuantileArgs),
    /// UF cumulative distribution function
    Cdf(PointArgs),
    /// UF density
    Pdf(PointArgs),
    /// Stress-strength probability R = 1 - F(1/2) = P(X2 < X1)
    Stress(ThetaArgs),
    /// Approximate moments of X1/(X1+X2)
    Moments(MomentArgs),
    /// Re-run a recorded command and compare its outputs
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Output directory [default: $UNIFRECHET_OUT_DIR or the current directory]
    #[arg(long, value_name = "DIR")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// CSV file with one observation per row, or `bundled:uefa`
    pub input: String,
    /// Comma-separated subset of uf, beta, kumaraswamy
    #[arg(long, value_delimiter = ',', default_value = "uf,beta,kumaraswamy")]
    pub models: Vec<String>,
    /// Column to read, by header name or zero-based index
    #[arg(long)]
    pub column: Option<String>,
    /// Also rank the models as if each had this many parameters
    #[arg(long, value_name = "K")]
    pub k_convention: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize, Clone, Copy)]
pub struct ThetaArgs {
    #[arg(long)]
    pub sigma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rho: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Sample bivariate pairs (X1, X2) instead of the UF law directly
    #[arg(long)]
    pub bivariate: bool,
    #[arg(long, required_unless_present = "bivariate")]
    pub sigma: Option<f64>,
    #[arg(long, required_if_eq("bivariate", "true"))]
    pub sigma1: Option<f64>,
    #[arg(long, required_if_eq("bivariate", "true"))]
    pub sigma2: Option<f64>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rho: f64,
    /// Number of draws
    #[arg(short = 'n', long = "n", value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// TOML study configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Override the configured number of worker threads
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantileArgs {
    #[arg(short = 'p', long = "p")]
    pub p: f64,
    #[command(flatten)]
    pub theta: ThetaArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PointArgs {
    #[arg(short = 'w', long = "w", allow_negative_numbers = true)]
    pub w: f64,
    #[command(flatten)]
    pub theta: ThetaArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentArgs {
    #[arg(long)]
    pub sigma1: f64,
    #[arg(long)]
    pub sigma2: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub rho: f64,
    /// Covariance of (X1, X2)
    #[arg(
        long,
        allow_negative_numbers = true,
        required_unless_present = "estimate_cov",
        conflicts_with = "estimate_cov"
    )]
    pub cov: Option<f64>,
    /// Estimate the covariance by simulation instead
    #[arg(long)]
    pub estimate_cov: bool,
    /// Draws used by --estimate-cov
    #[arg(long, default_value_t = 100_000)]
    pub cov_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    /// A manifest.json written by an earlier run
    pub manifest: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}
