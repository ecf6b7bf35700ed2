use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tsimg::impute::Pipeline;
use tsimg::series::RescaleMode;

#[derive(Debug, Parser)]
#[command(
    name = "tsimg",
    version,
    about = "Time series as images: encode, decode, impute, classify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode every series of a UCR file as GASF, GADF, MTF or a compound image.
    Encode(EncodeArgs),
    /// Reconstruct a rescaled series from a GASF matrix CSV.
    Decode(DecodeArgs),
    /// Train a denoising autoencoder for imputation.
    ImputeTrain(ImputeTrainArgs),
    /// Score a trained imputation model over repeated corruptions.
    ImputeEval(ImputeEvalArgs),
    /// Select (S, Q, C) by cross-validation and report the test error.
    Classify(ClassifyArgs),
    /// 1-nearest-neighbour Euclidean baseline error.
    Baseline(BaselineArgs),
    /// Generate a synthetic labeled dataset.
    Synth(SynthArgs),
    /// Re-run the command recorded in a run manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Gasf,
    Gadf,
    Mtf,
    Compound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rescale {
    Unit,
    Symmetric,
}

impl From<Rescale> for RescaleMode {
    fn from(r: Rescale) -> Self {
        match r {
            Rescale::Unit => RescaleMode::Unit,
            Rescale::Symmetric => RescaleMode::Symmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineArg {
    Gasf,
    Raw,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Self {
        match p {
            PipelineArg::Gasf => Pipeline::Gasf,
            PipelineArg::Raw => Pipeline::Raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sin2,
    Cbf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EncodeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub encoding: Encoding,
    #[arg(long, value_enum, default_value = "unit")]
    pub rescale: Rescale,
    /// PAA length for GASF/GADF.
    #[arg(long)]
    pub paa: Option<usize>,
    /// Quantile bins for MTF.
    #[arg(long, default_value_t = 8)]
    pub quantiles: usize,
    /// Output side length for MTF and compound images.
    #[arg(long)]
    pub image_size: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also render a PNG per series.
    #[arg(long)]
    pub png: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecodeArgs {
    /// GASF matrix CSV; repeat for several series.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImputeTrainArgs {
    /// UCR file; repeat to pool several files.
    #[arg(long, required = true)]
    pub train: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub pipeline: PipelineArg,
    #[arg(long, default_value_t = 0.2)]
    pub noise_rate: f64,
    #[arg(long, default_value_t = 500)]
    pub hidden: usize,
    #[arg(long, default_value_t = 20)]
    pub batch: usize,
    /// Defaults to 0.1 for raw and 0.1*n for gasf.
    #[arg(long)]
    pub lr: Option<f64>,
    /// Defaults to 1e-3 for gasf and 1e-5 for raw.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_epochs: usize,
    /// Shorten series by PAA before training.
    #[arg(long)]
    pub paa: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub model_out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImputeEvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, value_enum)]
    pub pipeline: PipelineArg,
    #[arg(long, default_value_t = 0.2)]
    pub noise_rate: f64,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long)]
    pub paa: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Dataset name in the report; defaults to the training file stem.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [16, 24, 32, 40, 48])]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32, 64])]
    pub quantiles: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4])]
    pub penalties: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, value_enum, default_value = "symmetric")]
    pub rescale: Rescale,
    /// SVM passes over the data.
    #[arg(long, default_value_t = tsimg::classify::DEFAULT_EPOCHS)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BaselineArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Extra series drawn after the first `count`, written to `--test-out`.
    #[arg(long, requires = "test_out")]
    pub test_count: Option<usize>,
    #[arg(long, requires = "test_count")]
    pub test_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
