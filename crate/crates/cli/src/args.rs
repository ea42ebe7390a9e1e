use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mrsband",
    version,
    about = "Spectral band selection and neural classification for MR spectra"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GlobalArgs {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Zone boundaries as `z1_end,z2_end`.
    #[arg(long, global = true, value_name = "Z1_END,Z2_END")]
    pub zones: Option<String>,

    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Directory for output artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Where feature selection is fitted relative to cross-validation.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,

    /// Whether zone Z1 may contribute selected variables.
    #[arg(long, global = true, value_name = "BOOL")]
    pub include_z1: Option<bool>,

    /// Comma-separated group percents.
    #[arg(long, global = true, value_name = "LIST")]
    pub percents: Option<String>,

    /// Echo-time tag of the input data (`set` or `let`).
    #[arg(long, global = true)]
    pub echo: Option<String>,

    /// TOML file with defaults for any global flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Paper,
    Nested,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a synthetic dataset CSV.
    Synth {
        #[command(flatten)]
        synth: SynthArgs,
        /// Output CSV path.
        #[arg(short = 'o', long = "output", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Compute the dissimilarity index matrix of one pair.
    Dim(PairArgs),
    /// Report zone energies of one pair.
    Energy(PairArgs),
    /// Write the cumulative-energy feature groups of one pair.
    Select(PairArgs),
    /// Train a network on one feature group of a pair.
    Train {
        #[command(flatten)]
        pair: PairArgs,
        /// Feature group to train on.
        #[arg(long, default_value_t = 10)]
        percent: u8,
        #[arg(long, default_value_t = 20)]
        hidden: usize,
        #[arg(long, default_value_t = 150)]
        epochs: usize,
    },
    /// Cross-validate a set of pairs and fit the ratio trend.
    Suite {
        #[command(flatten)]
        data: DataArgs,
        /// Pairs as `a:b` items separated by commas; defaults to all pairs.
        #[arg(long, value_name = "LIST", conflicts_with = "reference_pairs")]
        pairs: Option<String>,
        /// Use the reference pair list.
        #[arg(long)]
        reference_pairs: bool,
    },
    /// Fit the ratio trend to an existing suite CSV.
    Trend {
        /// Suite CSV; defaults to `suite.csv` in the output directory.
        #[arg(long, value_name = "FILE")]
        suite: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct SynthArgs {
    /// Samples per spectrum.
    #[arg(long, default_value_t = 512)]
    pub m: usize,
    /// Spectra per class, comma separated.
    #[arg(long, value_name = "LIST")]
    pub classes: Option<String>,
    /// Class codes, comma separated.
    #[arg(long, value_name = "LIST")]
    pub labels: Option<String>,
    /// Band `start:end` whose peak separates the classes.
    #[arg(long, value_name = "START:END")]
    pub sep_band: Option<String>,
    /// Per-class band peak levels in [0, 1]; defaults to evenly spaced.
    #[arg(long, value_name = "LIST")]
    pub levels: Option<String>,
    /// Band peak amplitude at level 1.
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Gaussian noise standard deviation.
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct DataArgs {
    /// Dataset CSV. Without it the synthesis flags describe the data.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["classes", "sep_band", "labels", "levels"])]
    pub data: Option<PathBuf>,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PairArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Class pair as `a:b`; may be omitted when the data has two classes.
    #[arg(long, value_name = "A:B")]
    pub pair: Option<String>,
}
