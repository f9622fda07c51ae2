use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "repeval",
    version,
    about = "Evaluate data representations by loss-data curves"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Master seed for all randomness
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Parallel training tasks (0 = one per core)
    #[arg(long, global = true, env = "REPEVAL_WORKERS")]
    pub workers: Option<usize>,
    /// TOML config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset
    Synth(SynthArgs),
    /// Estimate a loss-data curve
    Curve(CurveArgs),
    /// Compute VA, MDL, SDL and εSC from curve files
    Measure(MeasureArgs),
    /// Certified εSC by recursive grid search
    EscRefine(EscArgs),
    /// Render curves to SVG and CSV
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(subcommand)]
    pub task: SynthTask,
    /// Output file name inside the output directory (.csv selects CSV)
    #[arg(long, global = true)]
    pub output: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SynthTask {
    /// Parity of d bits under a fixed secret
    Parity {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "noisy")]
        repr: ReprArg,
        #[arg(long)]
        n: usize,
        /// Secret as a 0/1 string of length d; drawn from the seed if absent
        #[arg(long)]
        secret: Option<String>,
    },
    /// Two Gaussian classes at ±mu·e₁
    Gaussian {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReprArg {
    Noisy,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
pub enum MetricArg {
    Nll,
    ZeroOne,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
pub enum NoiseArg {
    None,
    Bernoulli,
}

/// Where losses come from: a dataset plus learning algorithm, or a stub.
#[derive(Debug, Clone, Default, Args)]
pub struct SourceArgs {
    /// Dataset file (binary or .csv)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Explicit holdout file; otherwise split off the dataset
    #[arg(long)]
    pub holdout: Option<PathBuf>,
    /// probe:mlp2[:WIDTH] | probe:linear | gf2 | marginal | label-copy |
    /// stub:inverse[:SCALE] | stub:power:FLOOR:SCALE:EXP | stub:constant:V |
    /// stub:step:BEFORE:AFTER:AT
    #[arg(long)]
    pub alg: Option<String>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub batch: Option<usize>,
    /// Replicate noise for stub algorithms
    #[arg(long, value_enum)]
    pub noise: Option<NoiseArg>,
    /// Per-example NLL cap (the loss bound B); stub bound for stubs
    #[arg(long)]
    pub loss_cap: Option<f64>,
    #[arg(long)]
    pub holdout_fraction: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Skip feature standardization for trainable probes
    #[arg(long)]
    pub no_normalize: bool,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// log:MIN:MAX:COUNT or a comma-separated list
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Curve name; also names the output file
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Curve JSON files, one column each
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    /// Sizes for VA and MDL
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<usize>,
    /// Tolerances for SDL and εSC
    #[arg(long, value_delimiter = ',')]
    pub epsilon: Vec<f64>,
    /// Column names, in curve order
    #[arg(long, value_delimiter = ',')]
    pub names: Vec<String>,
}

#[derive(Debug, Args)]
pub struct EscArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Largest size searched (N)
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Maximum number of training runs
    #[arg(long)]
    pub budget: Option<usize>,
    /// Run without asking for confirmation
    #[arg(long)]
    pub yes: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(required = true)]
    pub curves: Vec<PathBuf>,
    /// Draw a reference line at this loss
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// measures.json to render as a Markdown table
    #[arg(long)]
    pub measures: Option<PathBuf>,
}
