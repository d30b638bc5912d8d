use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Compare two latent distributions observed through ordinal responses.
#[derive(Debug, Parser)]
#[command(name = "ordlat", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordinal CDFs, differences and standard errors.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        /// Write step-function plot data (category, F_X, F_Y) as TSV.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Identified quantile sets computed from the point estimates.
    Identify {
        #[arg(value_enum)]
        kind: SetKind,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Inner confidence sets.
    Cs {
        #[arg(value_enum)]
        kind: SetKind,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Frequentist tests of dominance and single crossing.
    Test {
        #[arg(value_enum)]
        kind: TestArg,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Posterior probability of a dominance or crossing event.
    Bayes {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "sd1")]
        event: EventArg,
        #[arg(long, value_enum, default_value = "uniform")]
        prior: PriorArg,
        /// Posterior draws.
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a Monte Carlo study described by a scenario file.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write a one-row-per-study TSV summary.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file: raw rows, or a `category,count_x,count_y` table.
    pub input: PathBuf,
    #[arg(long, default_value = "group")]
    pub group_col: String,
    #[arg(long, default_value = "category")]
    pub category_col: String,
    #[arg(long)]
    pub weight_col: Option<String>,
    /// Group label of X (raw input only).
    #[arg(long)]
    pub x: Option<String>,
    /// Group label of Y (raw input only).
    #[arg(long)]
    pub y: Option<String>,
    /// Declared number of categories; raw categories must lie in 1..=J.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Merge contiguous categories, e.g. "1-12,13,14-25".
    #[arg(long)]
    pub merge: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PairArgs {
    /// Lower category of the within-group pair.
    #[arg(long)]
    pub j: Option<usize>,
    /// Upper category of the within-group pair.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SimArgs {
    /// Normal draws used for simulated critical values.
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Between,
    WithinFixed,
    WithinAll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    Sd1,
    Nonsd1,
    Sc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EventArg {
    Sd1,
    Sd1Yx,
    Sc,
    ScYx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorArg {
    Uniform,
    Improper,
}
