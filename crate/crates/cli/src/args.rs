use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fde", version, about = "Fractional differential entropy and maximum-entropy velocity profiles")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Relative tolerance of the adaptive quadrature [default: 1e-10]
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,

    /// Absolute tolerance of the adaptive quadrature [default: 1e-13]
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,

    /// Seed for randomized corpora [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output format [default: text]
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Decimals printed for numbers in text and csv output [default: 4]
    #[arg(long, global = true)]
    pub precision: Option<usize>,

    /// TOML file presetting any of the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    /// TOML key-value document with full precision.
    Kv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of one distribution at one order
    Entropy(EntropyArgs),
    /// Recompute the reference entropy table and list discrepancies
    Table2,
    /// Run the bound checks over a seeded random corpus
    Bounds(BoundsArgs),
    /// Velocity-profile model
    #[command(subcommand)]
    Velocity(VelocityCommand),
    /// Fit a profile and write one SVG plot
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntropyMethod {
    /// Closed form checked against quadrature, quadrature alone otherwise
    Auto,
    /// Adaptive Gauss–Kronrod
    Quadrature,
    /// Fixed graded Gauss–Legendre
    Fixed,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Distribution, e.g. `uniform:A=0,B=2`
    pub spec: String,

    #[arg(long)]
    pub alpha: f64,

    #[arg(long, value_enum, default_value_t = EntropyMethod::Auto)]
    pub method: EntropyMethod,

    /// Exit 0 on a complex-valued order and report the Shannon entropy instead
    #[arg(long)]
    pub allow_shannon_only: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 200)]
    pub draws: usize,

    /// Restrict the corpus to these families (comma separated names)
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<String>,

    /// Restrict to these bound operations (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub op: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum VelocityCommand {
    /// Fit k to a measured profile and score the model
    Fit(FitArgs),
    /// Tabulate the velocity law on a height grid
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Linear,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CdfArg {
    /// Truncated two-term closed form
    Est6,
    /// Quadrature of the density
    Est3,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = SolverArg::Linear)]
    pub solver: SolverArg,

    #[arg(long, value_enum, default_value_t = CdfArg::Est6)]
    pub cdf: CdfArg,

    /// `trapezoid`, `arithmetic`, or a number in (0, 1)
    #[arg(long, default_value = "trapezoid")]
    pub mean: String,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Profile file (`y_over_M,velocity` or `y,M,velocity,velocity_max`)
    pub input: PathBuf,

    #[command(flatten)]
    pub model: ModelArgs,

    /// Write cdf-fit, profile and regression SVGs into this directory
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub nu_m: f64,

    #[arg(long)]
    pub k: f64,

    /// Number of evenly spaced heights on [0, 1]
    #[arg(long, default_value_t = 11)]
    pub points: usize,

    #[arg(long, value_enum, default_value_t = SolverArg::Linear)]
    pub solver: SolverArg,

    /// Write a profile SVG here
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    CdfFit,
    Profile,
    Regression,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,

    pub input: PathBuf,

    #[command(flatten)]
    pub model: ModelArgs,
}
