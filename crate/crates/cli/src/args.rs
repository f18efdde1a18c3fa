use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20150419;

#[derive(Debug, Parser)]
#[command(name = "graphspread", version, about = "Graph and spectral spreads, uncertainty curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the lower uncertainty curve of one graph.
    Curve(CurveArgs),
    /// Average normalized curves over randomly weighted or sampled graphs.
    MeanCurve(MeanCurveArgs),
    /// Print the spectral spread, graph spread and Dirichlet form of a signal.
    Spread(SpreadArgs),
    /// Normalized curves of an 8-neighbor image graph, one CSV per distance kind.
    ImageCurve(ImageCurveArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Complete,
    Star,
    Ring,
    Path,
    RandomGeometric,
    File,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Star => "star",
            Family::Ring => "ring",
            Family::Path => "path",
            Family::RandomGeometric => "random-geometric",
            Family::File => "file",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    pub family: Family,
    /// Node count for generated families.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Graph file (`n`, then `u v w` lines) for `--family file`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Connection radius for random geometric graphs.
    #[arg(long, default_value_t = 0.3)]
    pub radius: f64,
    /// Gaussian kernel amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Gaussian kernel decay.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Seed for every random draw.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot data block next to the CSV.
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Distance: naive, invsim, diffusion:<alpha>, explicit:<file>, or explicit
    /// (the family's own lengths, random-geometric only).
    #[arg(long, default_value = "invsim")]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub u0: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Divide graph spreads by their maximum; the tolerance is then relative.
    #[arg(long)]
    pub normalize: bool,
    /// Replace the family's weights by uniform(0, 1) draws.
    #[arg(long)]
    pub random_weights: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MeanCurveArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "invsim")]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub u0: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Number of grid points in s.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Worker threads; results are merged in trial order.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpreadArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value = "invsim")]
    pub kind: String,
    #[arg(long, default_value_t = 0)]
    pub u0: usize,
    /// Signal file, one value per line.
    #[arg(long)]
    pub signal: PathBuf,
    /// Scale the signal to unit norm before evaluating spreads.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ImageCurveArgs {
    /// 8-bit PGM image (P2 or P5).
    #[arg(long, conflicts_with = "synthetic")]
    pub image: Option<PathBuf>,
    /// Use the built-in synthetic image of the given side length instead.
    #[arg(long)]
    pub synthetic: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Distance kinds; repeat the flag for several.
    #[arg(long = "kind", default_values_t = ["invsim".to_string(), "diffusion:1".to_string()])]
    pub kinds: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub u0: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Output path; each kind writes `<stem>.<kind>.csv`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
