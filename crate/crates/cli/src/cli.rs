use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use devex_core::Sidedness;

/// Error exponents, concentration bounds and simulations for binary
/// hypothesis testing. Results go to stdout as JSON; diagnostics go to
/// stderr (verbosity via DEVEX_LOG=error|info|debug).
#[derive(Debug, Parser)]
#[command(name = "devex", version)]
pub struct Cli {
    /// Flatten results to `quantity,value` CSV rows.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Cap on worker threads for parallel work.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact exponents next to refined and Azuma lower bounds.
    Exponents(ExponentsArgs),
    /// Azuma and refined concentration bounds for a bounded-jump martingale.
    Bounds(BoundsArgs),
    /// Fisher-information limits of the divergence and exponents.
    Fisher(FisherArgs),
    /// Monte Carlo estimates of the error probabilities.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ThresholdArgs {
    /// Upper threshold on the normalized LLR, nats per sample.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_upper: f64,

    /// Lower threshold on the normalized LLR, nats per sample.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda_lower: f64,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    /// JSON file with "alphabet", "p1" and "p2".
    pub pair_file: PathBuf,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Jump bound d.
    #[arg(long, allow_negative_numbers = true)]
    pub d: f64,

    /// Conditional variance bound, at most d^2.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_sq: f64,

    #[arg(long)]
    pub n: u64,

    /// Deviation per step.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,

    /// `one` or `two`.
    #[arg(long, default_value_t = Sidedness::OneSided)]
    pub sided: Sidedness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Bernoulli,
    Ternary,
}

#[derive(Debug, Args)]
pub struct FisherArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,

    /// Weight of the middle symbol (ternary family only).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,

    /// Comma-separated parameter offsets h.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.04,0.02,0.01,0.005",
        allow_negative_numbers = true
    )]
    pub offsets: Vec<f64>,

    /// Take the second distribution at theta - h instead of theta + h.
    #[arg(long)]
    pub below: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON file with "alphabet", "p1" and "p2".
    pub pair_file: PathBuf,

    /// Samples per trial.
    #[arg(long, default_value_t = 100)]
    pub n: u64,

    /// Trials per hypothesis.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,

    /// Prior probability of the first hypothesis.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub pi1: f64,
}
