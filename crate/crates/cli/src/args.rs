//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewgof::montecarlo::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "skewgof", version, about = "Integrated empirical-process goodness-of-fit tests and local Bahadur efficiency")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the 8 × 5 matrix of local Bahadur efficiencies with its deviation
    /// from the reference table.
    Table1(Table1Args),
    /// Test a data file against a symmetric law.
    Test(TestArgs),
    /// Simulate null critical values.
    Nulltable(NullArgs),
    /// Estimate power against skew alternatives on a θ grid.
    Power(PowerArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Print the eigen-constants κ_j and μ₀.
    Eigen(EigenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Latex,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    /// Directory for cached null tables.
    #[arg(long, env = "SKEWGOF_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Always simulate; neither read nor write the cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Shorthand for `--format latex`.
    #[arg(long, conflicts_with = "format")]
    pub latex: bool,
    /// Largest accepted |computed − reference| per cell.
    #[arg(long, default_value_t = 5e-4)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// One value per line (`#` starts a comment), or CSV with `--column`.
    #[arg(long, short)]
    pub input: PathBuf,
    /// CSV column holding the observations.
    #[arg(long)]
    pub column: Option<String>,
    /// Hypothesized law.
    #[arg(long, short)]
    pub density: String,
    /// Statistics to report, comma separated; all eight by default.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Vec<String>,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    /// Rejection region; each statistic's default when omitted.
    #[arg(long)]
    pub sidedness: Option<String>,
    /// Null replicates used for the critical values.
    #[arg(long, default_value_t = 10_000)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct NullArgs {
    /// Sample size.
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Statistics to include, comma separated; all eight by default.
    #[arg(long, value_delimiter = ',')]
    pub kinds: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, short)]
    pub kind: String,
    /// Base law f.
    #[arg(long, short)]
    pub density: String,
    /// Skewing law G.
    #[arg(long, short = 'g')]
    pub skew: String,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2")]
    pub theta: Vec<f64>,
    /// Replicates per θ.
    #[arg(long, default_value_t = 2000)]
    pub replicates: usize,
    /// Replicates for the null table.
    #[arg(long, default_value_t = 10_000)]
    pub null_replicates: usize,
    #[arg(long)]
    pub sidedness: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub cache: CacheArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// conditions, slopes, lao, eigen or statistics.
    pub suite: String,
    #[arg(long, default_value_t = 5e-4)]
    pub mu0_tolerance: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub route_tolerance: f64,
    /// Random samples for the statistics suite.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Grid cells for the statistics oracle.
    #[arg(long, default_value_t = 100_000)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long, short, default_value_t = 5)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}
