//! `ammsim`: batch front end for the AMM arbitrage simulation library.
//!
//! Five subcommands cover the laboratory: `arb-quote` (closed forms vs the
//! numeric oracle), `simulate` (single run telemetry), `fee-sweep`
//! (paired multi-replica revenue statistics), `walk` and `walk-compare`
//! (the threshold-reward random walk). Every run is fully described by its
//! flags plus seed, and identical specs produce byte-identical output.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Failure classes with distinct exit codes: usage/validation errors exit
/// with 2, a no-arbitrage verdict from `arb-quote` with 3, I/O with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    NoArbitrage(String),
    Io(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NoArbitrage(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ammsim_core::Error> for CliError {
    fn from(err: ammsim_core::Error) -> Self {
        match err {
            ammsim_core::Error::NoArbitrage { .. } => CliError::NoArbitrage(err.to_string()),
            _ => CliError::Usage(err.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    pub fn as_str(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }
}

impl std::str::FromStr for FormatArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(FormatArg::Csv),
            "json" => Ok(FormatArg::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Multiplicative,
    Additive,
}

impl ModeArg {
    pub fn to_mode(self) -> ammsim_core::PathMode {
        match self {
            ModeArg::Multiplicative => ammsim_core::PathMode::Multiplicative,
            ModeArg::Additive => ammsim_core::PathMode::Additive,
        }
    }
}

impl std::str::FromStr for ModeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multiplicative" => Ok(ModeArg::Multiplicative),
            "additive" => Ok(ModeArg::Additive),
            other => Err(format!(
                "unknown mode `{other}` (expected multiplicative or additive)"
            )),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Master seed for all randomness
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (arb-quote defaults to a text report, the rest to csv)
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// key=value config file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ArbQuoteArgs {
    /// Pool/reference price ratio in the trade's favor
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Pool fee
    #[arg(long, allow_negative_numbers = true)]
    pub fee: Option<f64>,
    /// Flashloan fee
    #[arg(long, allow_negative_numbers = true)]
    pub flashloan_fee: Option<f64>,
    /// Reciprocal of the incoming reserve
    #[arg(long, allow_negative_numbers = true)]
    pub price_impact: Option<f64>,
    /// Fixed cost per arbitrage cycle
    #[arg(long, allow_negative_numbers = true)]
    pub txn_cost: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of price steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Per-step volatility of the reference price
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Per-step drift of the reference price
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Initial price (pool and reference both start here)
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Pool invariant depth L
    #[arg(long, allow_negative_numbers = true)]
    pub liquidity: Option<f64>,
    /// Pool fee
    #[arg(long, allow_negative_numbers = true)]
    pub fee: Option<f64>,
    /// Flashloan fee
    #[arg(long, allow_negative_numbers = true)]
    pub flashloan_fee: Option<f64>,
    /// Fixed cost per arbitrage cycle
    #[arg(long, allow_negative_numbers = true)]
    pub txn_cost: Option<f64>,
    /// Price step mode
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FeeSweepArgs {
    /// Number of price steps per run
    #[arg(long)]
    pub steps: Option<usize>,
    /// Per-step volatility of the reference price
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Per-step drift of the reference price
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Initial price (pool and reference both start here)
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Pool invariant depth L
    #[arg(long, allow_negative_numbers = true)]
    pub liquidity: Option<f64>,
    /// Comma-separated fee values to sweep
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub fees: Option<Vec<f64>>,
    /// Independent runs per fee value
    #[arg(long)]
    pub replicas: Option<usize>,
    /// Flashloan fee
    #[arg(long, allow_negative_numbers = true)]
    pub flashloan_fee: Option<f64>,
    /// Fixed cost per arbitrage cycle
    #[arg(long, allow_negative_numbers = true)]
    pub txn_cost: Option<f64>,
    /// Price step mode
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Number of walk steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trigger threshold
    #[arg(long)]
    pub k: Option<u32>,
    /// Probability of an upward step
    #[arg(long, allow_negative_numbers = true)]
    pub p_up: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct WalkCompareArgs {
    /// Number of walk steps per replica
    #[arg(long)]
    pub steps: Option<usize>,
    /// Comma-separated trigger thresholds
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    /// Replicas per threshold
    #[arg(long)]
    pub replicas: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quote the optimal arbitrage for given parameters, with an
    /// independent numeric cross-check
    ArbQuote(ArbQuoteArgs),
    /// Run one pool-vs-reference simulation and emit per-step telemetry
    Simulate(SimulateArgs),
    /// Sweep fee values over paired replicas and aggregate revenue
    FeeSweep(FeeSweepArgs),
    /// Run one threshold-reward random walk
    Walk(WalkArgs),
    /// Compare mean walk rewards across thresholds
    WalkCompare(WalkCompareArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "ammsim",
    version,
    about = "Deterministic constant-product AMM arbitrage laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ArbQuote(args) => commands::arb_quote(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::FeeSweep(args) => commands::fee_sweep(args),
        Command::Walk(args) => commands::walk(args),
        Command::WalkCompare(args) => commands::walk_compare(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Usage(e) | CliError::Io(e) => eprintln!("error: {e:#}"),
                CliError::NoArbitrage(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(err.exit_code())
        }
    }
}
