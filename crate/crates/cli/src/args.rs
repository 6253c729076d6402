use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use snowball_core::rng::parse_seed;

#[derive(Debug, Parser)]
#[command(name = "snowball", version, about = "Dual-mode simulated annealing for Ising and Max-Cut problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anneal one instance once.
    Solve(RunArgs),
    /// Estimate success probability and time-to-solution over many runs.
    Tts(TtsArgs),
    /// Run the built-in oracle checks.
    Verify(VerifyArgs),
    /// Write a generated instance in Gset format.
    Gen(GenArgs),
    /// Print instance statistics.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["gset", "k2000", "complete", "planted"])))]
pub struct SourceArgs {
    /// Gset file.
    #[arg(long, value_name = "PATH")]
    pub gset: Option<PathBuf>,
    /// Complete 2000-vertex graph with random ±1 weights.
    #[arg(long)]
    pub k2000: bool,
    /// Complete N-vertex graph with random ±1 weights.
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// Text bitmap; builds the planted grid graph.
    #[arg(long, value_name = "PATH")]
    pub planted: Option<PathBuf>,
    /// Seed for the random graph generators.
    #[arg(long, value_name = "U64", default_value = "1", value_parser = seed_arg)]
    pub graph_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    RandomScan,
    Roulette,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithArg {
    Exact,
    Lut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Linear,
    Cosine,
    Constant,
}

/// Engine settings. Unset values fall back to `--config`, then defaults.
#[derive(Debug, Args, Default)]
pub struct EngineArgs {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Null transitions with probability 1 - W/N (roulette only).
    #[arg(long)]
    pub uniformized: bool,
    #[arg(long, value_enum)]
    pub arith: Option<ArithArg>,
    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleArg>,
    #[arg(long, value_name = "R")]
    pub t0: Option<f64>,
    #[arg(long, value_name = "R")]
    pub t1: Option<f64>,
    /// Iterations per run (default 50 n).
    #[arg(long, value_name = "N")]
    pub steps: Option<u64>,
    #[arg(long, value_name = "B")]
    pub bitplanes: Option<u32>,
    /// Decimal or 0x-prefixed hexadecimal. Defaults to `SNOWBALL_SEED`, then 1.
    #[arg(long, value_name = "U64", value_parser = seed_arg)]
    pub seed: Option<u64>,
    /// Flat `key = value` file with the same settings.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").args(["target_cut", "target_energy"])))]
pub struct TargetArgs {
    /// Success iff best cut >= N.
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    pub target_cut: Option<i64>,
    /// Success iff best energy <= N.
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    pub target_energy: Option<i64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TtsArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_name = "R", default_value_t = 100)]
    pub runs: u64,
    /// Target confidence of reaching the threshold.
    #[arg(long, value_name = "R", default_value_t = 0.99)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_name = "U64", default_value = "1", value_parser = seed_arg)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Output file (standard output when omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub source: SourceArgs,
}

fn seed_arg(text: &str) -> Result<u64, String> {
    parse_seed(text).map_err(|e| format!("{e} (expected a decimal or 0x-prefixed seed)"))
}
