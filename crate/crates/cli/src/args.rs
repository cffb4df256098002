use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ptmathieu",
    version,
    about = "Stability boundaries of the PT-symmetric Mathieu equation ψ'' + [a + 2ε(cos x + iβ sin x)]ψ = 0",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file whose keys mirror the long flag names; flags win on conflict
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form boundary curves (a₀ = 0 and both a₀ = 1/4 edges) per β
    Perturb(PerturbArgs),
    /// Floquet stability raster over an (a, ε) grid
    Chart(ChartArgs),
    /// Trace one boundary numerically and report its curvature
    Trace(TraceArgs),
    /// Band edges from the truncated Hill matrix
    Edges(EdgesArgs),
    /// Closed form, Floquet and Hill values of every boundary side by side
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Output file (written atomically); stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JobsArg {
    /// Worker threads; 0 uses every available processor
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct PerturbArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.9], allow_negative_numbers = true)]
    pub beta: Vec<f64>,

    #[arg(long, default_value_t = 0.5)]
    pub eps_max: f64,

    #[arg(long, default_value_t = 101)]
    pub samples: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct ChartArgs {
    #[arg(long, default_value_t = -0.6, allow_negative_numbers = true)]
    pub a_min: f64,

    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub a_max: f64,

    #[arg(long, default_value_t = 141)]
    pub a_steps: usize,

    #[arg(long, default_value_t = 0.0)]
    pub eps_min: f64,

    #[arg(long, default_value_t = 0.5)]
    pub eps_max: f64,

    #[arg(long, default_value_t = 51)]
    pub eps_steps: usize,

    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta: f64,

    /// RK4 steps per period
    #[arg(long, default_value_t = ptmathieu::floquet::DEFAULT_STEPS)]
    pub steps: usize,

    /// Growth-rate threshold separating stable from unstable
    #[arg(long, default_value_t = ptmathieu::floquet::DEFAULT_GROWTH_TOL)]
    pub tol: f64,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(flatten)]
    pub jobs: JobsArg,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct TraceArgs {
    /// zero, quarter+ or quarter-
    #[arg(long, default_value = "zero")]
    pub branch: String,

    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta: f64,

    #[arg(long, default_value_t = 0.1)]
    pub eps_max: f64,

    #[arg(long, default_value_t = 41)]
    pub samples: usize,

    #[arg(long, default_value_t = ptmathieu::floquet::DEFAULT_STEPS)]
    pub steps: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EdgesArgs {
    /// Floquet exponent: 0 (periodic) or 0.5 (antiperiodic)
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,

    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,

    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub eps: f64,

    /// Hill truncation N (Fourier indices -N..N)
    #[arg(long, default_value_t = ptmathieu::hill::DEFAULT_TRUNCATION)]
    pub trunc: usize,

    #[arg(long, default_value_t = 3)]
    pub count: usize,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 0.9], allow_negative_numbers = true)]
    pub beta: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.05, 0.1], allow_negative_numbers = true)]
    pub eps: Vec<f64>,

    #[arg(long, default_value_t = 2 * ptmathieu::floquet::DEFAULT_STEPS)]
    pub steps: usize,

    #[arg(long, default_value_t = ptmathieu::hill::DEFAULT_TRUNCATION)]
    pub trunc: usize,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(flatten)]
    pub jobs: JobsArg,
}
