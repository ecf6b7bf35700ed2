//! Missing-value imputation by denoising autoencoders.
//!
//! Two pipelines share one corruption protocol: a fraction of the raw points
//! is set to zero, then the series is rescaled to `[0, 1]` with the bounds of
//! its clean version (so the zeros land where they would in the clean
//! image). The raw pipeline feeds the rescaled series straight into the
//! autoencoder. The GASF pipeline feeds the flattened full-resolution GASF
//! and inverts the diagonal of the recovered image.

mod da;

pub use da::{DaModel, Gradients, TrainConfig, TrainOutcome};

use ndarray::{Array2, ArrayView1};
use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaf::{gasf, FieldKind, FieldMatrix};
use crate::reconstruct::reconstruct_series;
use crate::rng;
use crate::series::{min_max, paa, rescale, rescale_with_bounds, PaaConfig, RescaleMode, ScaledSeries, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptionSpec {
    pub rate: f64,
    pub seed: u64,
}

impl Default for CorruptionSpec {
    fn default() -> Self {
        Self { rate: 0.2, seed: 0 }
    }
}

/// A corrupted copy of a series and the (sorted) indices that were zeroed.
#[derive(Debug, Clone, PartialEq)]
pub struct Corrupted {
    pub values: Vec<f64>,
    pub mask: Vec<usize>,
}

pub fn corrupted_count(n: usize, rate: f64) -> Result<usize> {
    let count = (rate * n as f64).round() as usize;
    if !(rate > 0.0 && rate < 1.0) || count < 1 || count > n {
        return Err(Error::RateOutOfRange(rate));
    }
    Ok(count)
}

/// Zeroes `round(rate * n)` distinct indices drawn uniformly from `rng`.
pub fn corrupt_with(values: &[f64], rate: f64, rng: &mut rng::Rng) -> Result<Corrupted> {
    let count = corrupted_count(values.len(), rate)?;
    let mut mask = sample(rng, values.len(), count).into_vec();
    mask.sort_unstable();
    let mut out = values.to_vec();
    for &i in &mask {
        out[i] = 0.0;
    }
    Ok(Corrupted { values: out, mask })
}

/// Salt-and-pepper corruption with its own seeded stream.
pub fn corrupt(values: &[f64], spec: &CorruptionSpec) -> Result<Corrupted> {
    corrupt_with(values, spec.rate, &mut rng::seeded(spec.seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Gasf,
    Raw,
}

impl Pipeline {
    /// Stopping tolerance used when none is given.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Pipeline::Gasf => 1e-3,
            Pipeline::Raw => 1e-5,
        }
    }

    /// Learning rate used when none is given, for series of length `n`.
    /// The loss is a per-element mean, so its gradient shrinks with the input
    /// width; the rate grows by the same factor to keep step sizes comparable.
    pub fn default_learning_rate(self, n: usize) -> f64 {
        TrainConfig::default().learning_rate * (self.input_dim(n) / n.max(1)) as f64
    }

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Gasf => "gasf",
            Pipeline::Raw => "raw",
        }
    }

    /// Autoencoder input width for series of length `n`.
    pub fn input_dim(self, n: usize) -> usize {
        match self {
            Pipeline::Gasf => n * n,
            Pipeline::Raw => n,
        }
    }
}

impl std::str::FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gasf" => Ok(Pipeline::Gasf),
            "raw" => Ok(Pipeline::Raw),
            other => Err(format!("unknown pipeline '{other}'")),
        }
    }
}

/// Stacked autoencoder inputs and targets plus the corruption masks used.
#[derive(Debug, Clone)]
pub struct TrainingPairs {
    pub inputs: Array2<f64>,
    pub targets: Array2<f64>,
    pub masks: Vec<Vec<usize>>,
}

fn encode_row(scaled: &ScaledSeries, pipeline: Pipeline) -> Result<Vec<f64>> {
    match pipeline {
        Pipeline::Gasf => Ok(gasf(scaled)?.flatten()),
        Pipeline::Raw => Ok(scaled.values.clone()),
    }
}

/// Builds `(corrupted, clean)` autoencoder pairs. Series are corrupted in
/// order from one stream seeded by `spec.seed`.
pub fn build_training_pairs(series: &[TimeSeries], spec: &CorruptionSpec, pipeline: Pipeline) -> Result<TrainingPairs> {
    let Some(first) = series.first() else {
        return Err(Error::InvalidConfig("no series to build training pairs from".into()));
    };
    let n = first.len();
    let d = pipeline.input_dim(n);
    let mut rng = rng::seeded(spec.seed);
    let mut inputs = Array2::zeros((series.len(), d));
    let mut targets = Array2::zeros((series.len(), d));
    let mut masks = Vec::with_capacity(series.len());
    for (row, ts) in series.iter().enumerate() {
        if ts.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: ts.len(),
            });
        }
        let clean = rescale(ts, RescaleMode::Unit)?;
        let broken = corrupt_with(&ts.values, spec.rate, &mut rng)?;
        let broken_scaled = rescale_with_bounds(&broken.values, clean.origin, RescaleMode::Unit)?;
        targets
            .row_mut(row)
            .assign(&ArrayView1::from(&encode_row(&clean, pipeline)?));
        inputs
            .row_mut(row)
            .assign(&ArrayView1::from(&encode_row(&broken_scaled, pipeline)?));
        masks.push(broken.mask);
    }
    Ok(TrainingPairs { inputs, targets, masks })
}

pub fn build_training_pairs_gasf(series: &[TimeSeries], spec: &CorruptionSpec) -> Result<TrainingPairs> {
    build_training_pairs(series, spec, Pipeline::Gasf)
}

pub fn build_training_pairs_raw(series: &[TimeSeries], spec: &CorruptionSpec) -> Result<TrainingPairs> {
    build_training_pairs(series, spec, Pipeline::Raw)
}

fn check_dim(model: &DaModel, expected: usize) -> Result<()> {
    if model.input_dim() != expected {
        return Err(Error::DimMismatch {
            expected: model.input_dim(),
            found: expected,
        });
    }
    Ok(())
}

/// Recovers a corrupted raw series through its GASF: encode with the clean
/// bounds, denoise, clamp to `[-1, 1]`, symmetrize, invert the diagonal.
pub fn impute_via_gasf(model: &DaModel, corrupted: &[f64], clean_bounds: (f64, f64)) -> Result<ScaledSeries> {
    let n = corrupted.len();
    check_dim(model, n * n)?;
    let broken = rescale_with_bounds(corrupted, clean_bounds, RescaleMode::Unit)?;
    let image = gasf(&broken)?.flatten();
    let out = model.forward(ArrayView1::from(&image))?;
    let mut cells = out
        .into_shape_with_order((n, n))
        .expect("n*n outputs")
        .mapv(|v| v.clamp(-1.0, 1.0));
    let transposed = cells.t().to_owned();
    cells += &transposed;
    cells *= 0.5;
    let recovered = FieldMatrix {
        kind: FieldKind::Gasf,
        cells,
        rescale_mode: Some(RescaleMode::Unit),
    };
    let mut series = reconstruct_series(&recovered)?;
    series.origin = clean_bounds;
    Ok(series)
}

/// Direct denoising of a rescaled series; output clamped to `[0, 1]`.
pub fn impute_via_raw(model: &DaModel, corrupted: &ScaledSeries) -> Result<ScaledSeries> {
    check_dim(model, corrupted.len())?;
    let out = model.forward(ArrayView1::from(&corrupted.values))?;
    Ok(corrupted.with_values(out.iter().map(|v| v.clamp(0.0, 1.0)).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    /// MSE over every point of the series.
    pub full_mse: f64,
    /// MSE over the corrupted points only.
    pub imputation_mse: f64,
}

pub fn score(pred: &[f64], truth: &[f64], mask: &[usize]) -> Result<Score> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            found: pred.len(),
        });
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    if let Some(&index) = mask.iter().find(|&&i| i >= truth.len()) {
        return Err(Error::MaskOutOfBounds {
            index,
            len: truth.len(),
        });
    }
    let sq = |i: usize| (pred[i] - truth[i]).powi(2);
    Ok(Score {
        full_mse: (0..truth.len()).map(sq).sum::<f64>() / truth.len() as f64,
        imputation_mse: mask.iter().map(|&i| sq(i)).sum::<f64>() / mask.len() as f64,
    })
}

/// Averages over repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationReport {
    pub pipeline: Pipeline,
    pub full_mse: f64,
    pub imputation_mse: f64,
    pub runs: usize,
    pub per_run: Vec<Score>,
    /// PAA length the series were reduced to before imputation, if any.
    pub paa: Option<usize>,
}

impl ImputationReport {
    pub fn from_runs(pipeline: Pipeline, per_run: Vec<Score>, paa: Option<usize>) -> Self {
        let k = per_run.len().max(1) as f64;
        Self {
            pipeline,
            full_mse: per_run.iter().map(|s| s.full_mse).sum::<f64>() / k,
            imputation_mse: per_run.iter().map(|s| s.imputation_mse).sum::<f64>() / k,
            runs: per_run.len(),
            per_run,
            paa,
        }
    }

    /// `|full_mse - imputation_mse|`
    pub fn gap(&self) -> f64 {
        (self.full_mse - self.imputation_mse).abs()
    }
}

/// Optionally shortens every series by PAA (for long series whose
/// full-resolution GASF would be too wide for the autoencoder).
pub fn preprocess(series: &[TimeSeries], paa_len: Option<usize>) -> Result<Vec<TimeSeries>> {
    match paa_len {
        None => Ok(series.to_vec()),
        Some(s) => series
            .iter()
            .map(|ts| {
                Ok(TimeSeries {
                    values: paa(&ts.values, PaaConfig::new(s))?,
                    label: ts.label,
                })
            })
            .collect(),
    }
}

/// Corrupts each test series (one stream seeded by `spec.seed`), imputes it
/// and averages the per-series scores. Scores are in rescaled units.
pub fn evaluate_model(
    model: &DaModel,
    test: &[TimeSeries],
    spec: &CorruptionSpec,
    pipeline: Pipeline,
) -> Result<Score> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let mut rng = rng::seeded(spec.seed);
    let mut full = 0.0;
    let mut imputed = 0.0;
    for ts in test {
        let clean = rescale(ts, RescaleMode::Unit)?;
        let broken = corrupt_with(&ts.values, spec.rate, &mut rng)?;
        let pred = match pipeline {
            Pipeline::Gasf => impute_via_gasf(model, &broken.values, clean.origin)?,
            Pipeline::Raw => {
                let scaled = rescale_with_bounds(&broken.values, clean.origin, RescaleMode::Unit)?;
                impute_via_raw(model, &scaled)?
            }
        };
        let s = score(&pred.values, &clean.values, &broken.mask)?;
        full += s.full_mse;
        imputed += s.imputation_mse;
    }
    let k = test.len() as f64;
    Ok(Score {
        full_mse: full / k,
        imputation_mse: imputed / k,
    })
}

/// One complete imputation experiment: for each run, fresh init, corruption
/// and training on `train`, then scoring on a corrupted `test`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    pub rate: f64,
    pub hidden: usize,
    pub train: TrainConfig,
    pub runs: usize,
    pub seed: u64,
    pub paa: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults for series of length `n`.
    pub fn new(pipeline: Pipeline, n: usize) -> Self {
        Self {
            pipeline,
            rate: 0.2,
            hidden: 500,
            train: TrainConfig {
                tolerance: pipeline.default_tolerance(),
                learning_rate: pipeline.default_learning_rate(n),
                ..TrainConfig::default()
            },
            runs: 10,
            seed: 0,
            paa: None,
        }
    }
}

/// Seeds for one run: `(init, train corruption, test corruption)`.
pub fn run_seeds(run_seed: u64) -> (u64, u64, u64) {
    let mut r = rng::seeded(run_seed);
    (r.random(), r.random(), r.random())
}

/// Trains a fresh model for one run; returns it with its training outcome.
pub fn train_model(
    train: &[TimeSeries],
    cfg: &ExperimentConfig,
    init_seed: u64,
    corruption_seed: u64,
    progress: impl FnMut(usize, f64),
) -> Result<(DaModel, TrainOutcome)> {
    let train = preprocess(train, cfg.paa)?;
    let pairs = build_training_pairs(
        &train,
        &CorruptionSpec {
            rate: cfg.rate,
            seed: corruption_seed,
        },
        cfg.pipeline,
    )?;
    let mut model = DaModel::init(pairs.inputs.ncols(), cfg.hidden, init_seed)?;
    let outcome = model.train(pairs.inputs.view(), pairs.targets.view(), &cfg.train, progress)?;
    Ok((model, outcome))
}

/// Runs `cfg.runs` independent experiments with run seeds `seed + k`.
pub fn run_experiment(train: &[TimeSeries], test: &[TimeSeries], cfg: &ExperimentConfig) -> Result<ImputationReport> {
    use rayon::prelude::*;
    let test = preprocess(test, cfg.paa)?;
    let per_run = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|k| {
            let (init, train_seed, test_seed) = run_seeds(cfg.seed.wrapping_add(k));
            let (model, _) = train_model(train, cfg, init, train_seed, |_, _| {})?;
            evaluate_model(
                &model,
                &test,
                &CorruptionSpec {
                    rate: cfg.rate,
                    seed: test_seed,
                },
                cfg.pipeline,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ImputationReport::from_runs(cfg.pipeline, per_run, cfg.paa))
}

/// Clean rescale bounds of a raw series.
pub fn clean_bounds(values: &[f64]) -> (f64, f64) {
    min_max(values)
}
