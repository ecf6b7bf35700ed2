//! Hyperparameter selection over image size `S`, quantile count `Q` and
//! penalty `C`.
//!
//! For every applicable `(S, Q)` the training set is encoded as compound
//! images and `C` is chosen by stratified k-fold cross validation. The grid
//! point with the lowest CV error wins; ties prefer larger `S`, then larger
//! `Q`, then larger `C`. The final model is refit on the full training set.

use std::cmp::Ordering;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::compound::compound_image;
use super::linear::{error_rate, fit_linear, LinearModel, SvmConfig};
use crate::error::{Error, Result};
use crate::ingest::Dataset;
use crate::rng;
use crate::series::{RescaleMode, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionGrid {
    pub sizes: Vec<usize>,
    pub quantiles: Vec<usize>,
    pub penalties: Vec<f64>,
    pub folds: usize,
    pub mode: RescaleMode,
    pub svm: SvmConfig,
}

impl Default for SelectionGrid {
    fn default() -> Self {
        Self {
            sizes: vec![16, 24, 32, 40, 48],
            quantiles: vec![8, 16, 32, 64],
            penalties: (-4..=4).map(|e| 10f64.powi(e)).collect(),
            folds: 5,
            mode: RescaleMode::Symmetric,
            svm: SvmConfig::default(),
        }
    }
}

/// Outcome of cross-validating the penalty grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub penalty: f64,
    pub cv_error: f64,
    /// `(C, error)` for every penalty tried, in grid order.
    pub per_penalty: Vec<(f64, f64)>,
}

/// Stratified fold ids: each class's samples are shuffled with `seed` and
/// dealt round-robin, continuing the deal across classes.
pub fn stratified_folds(labels: &[i64], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 || labels.len() < folds {
        return Err(Error::TooFewSamples {
            samples: labels.len(),
            folds,
        });
    }
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let mut rng = rng::seeded(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    Ok(assignment)
}

fn take_rows(x: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
    x.select(ndarray::Axis(0), rows)
}

/// Pooled CV error of one penalty: misclassified held-out samples over all
/// samples. A training fold holding a single class predicts that class.
fn cv_error(
    x: &Array2<f64>,
    labels: &[i64],
    fold_of: &[usize],
    folds: usize,
    penalty: f64,
    seed: u64,
    svm: &SvmConfig,
) -> Result<f64> {
    let mut wrong = 0usize;
    for f in 0..folds {
        let train: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] != f).collect();
        let held: Vec<usize> = (0..labels.len()).filter(|&i| fold_of[i] == f).collect();
        if held.is_empty() {
            continue;
        }
        let train_labels: Vec<i64> = train.iter().map(|&i| labels[i]).collect();
        let held_labels: Vec<i64> = held.iter().map(|&i| labels[i]).collect();
        let predictions = match fit_linear(take_rows(x, &train).view(), &train_labels, penalty, seed, svm) {
            Ok(model) => model.predict_all(take_rows(x, &held).view()),
            Err(Error::SingleClass) => vec![train_labels[0]; held.len()],
            Err(e) => return Err(e),
        };
        wrong += predictions.iter().zip(&held_labels).filter(|(p, l)| p != l).count();
    }
    Ok(wrong as f64 / labels.len() as f64)
}

/// Picks the penalty with the lowest k-fold CV error; ties go to the
/// larger penalty.
pub fn cv_select_c(
    features: &Array2<f64>,
    labels: &[i64],
    folds: usize,
    penalties: &[f64],
    seed: u64,
    svm: &SvmConfig,
) -> Result<CvResult> {
    if penalties.is_empty() {
        return Err(Error::InvalidConfig("empty penalty grid".into()));
    }
    let fold_of = stratified_folds(labels, folds, seed)?;
    let per_penalty = penalties
        .iter()
        .map(|&c| Ok((c, cv_error(features, labels, &fold_of, folds, c, seed, svm)?)))
        .collect::<Result<Vec<_>>>()?;
    let &(penalty, cv_error) = per_penalty
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .expect("non-empty grid");
    Ok(CvResult {
        penalty,
        cv_error,
        per_penalty,
    })
}

/// Compound-image features of `series`, one row each.
pub fn compound_features(
    series: &[TimeSeries],
    size: usize,
    num_bins: usize,
    mode: RescaleMode,
) -> Result<Array2<f64>> {
    let rows = series
        .par_iter()
        .map(|ts| compound_image(ts, size, num_bins, mode).map(|img| img.flatten()))
        .collect::<Result<Vec<_>>>()?;
    let width = 3 * size * size;
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(Array2::from_shape_vec((series.len(), width), flat).expect("uniform rows"))
}

fn labels_of(series: &[TimeSeries]) -> Result<Vec<i64>> {
    series
        .iter()
        .enumerate()
        .map(|(index, ts)| ts.label.ok_or(Error::Unlabeled { index }))
        .collect()
}

/// CV result of one `(S, Q)` grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub size: usize,
    pub quantiles: usize,
    pub penalty: f64,
    pub cv_error: f64,
}

/// Selection order: lower CV error first, then larger S, Q and C.
pub fn compare_grid_points(a: &GridPoint, b: &GridPoint) -> Ordering {
    a.cv_error
        .total_cmp(&b.cv_error)
        .then(b.size.cmp(&a.size))
        .then(b.quantiles.cmp(&a.quantiles))
        .then(b.penalty.total_cmp(&a.penalty))
}

/// Picks the best point under [`compare_grid_points`].
pub fn best_grid_point(points: &[GridPoint]) -> Option<&GridPoint> {
    points.iter().min_by(|a, b| compare_grid_points(a, b))
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub best: GridPoint,
    pub model: LinearModel,
    /// Every evaluated grid point, in grid order.
    pub evaluated: Vec<GridPoint>,
    pub mode: RescaleMode,
}

/// Runs the full `(S, Q, C)` search on `train`. Grid points with `S` or `Q`
/// larger than the series length are skipped.
pub fn model_select(train: &[TimeSeries], grid: &SelectionGrid, seed: u64) -> Result<Selection> {
    let n = train.first().map(TimeSeries::len).unwrap_or(0);
    let labels = labels_of(train)?;
    let combos: Vec<(usize, usize)> = grid
        .sizes
        .iter()
        .flat_map(|&s| grid.quantiles.iter().map(move |&q| (s, q)))
        .filter(|&(s, q)| s >= 1 && s <= n && q >= 2 && q <= n)
        .collect();
    if combos.is_empty() {
        return Err(Error::EmptyGrid(n));
    }
    let evaluated = combos
        .par_iter()
        .map(|&(size, quantiles)| {
            let x = compound_features(train, size, quantiles, grid.mode)?;
            let cv = cv_select_c(&x, &labels, grid.folds, &grid.penalties, seed, &grid.svm)?;
            Ok(GridPoint {
                size,
                quantiles,
                penalty: cv.penalty,
                cv_error: cv.cv_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = best_grid_point(&evaluated).expect("non-empty").clone();
    let x = compound_features(train, best.size, best.quantiles, grid.mode)?;
    let model = fit_linear(x.view(), &labels, best.penalty, seed, &grid.svm)?;
    Ok(Selection {
        best,
        model,
        evaluated,
        mode: grid.mode,
    })
}

/// Test error of a selected model on `test`.
pub fn evaluate(
    model: &LinearModel,
    test: &[TimeSeries],
    size: usize,
    num_bins: usize,
    mode: RescaleMode,
) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let x = compound_features(test, size, num_bins, mode)?;
    error_rate(model, x.view(), &labels_of(test)?)
}

/// One dataset row: chosen hyperparameters and errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub dataset: String,
    pub size: usize,
    pub quantiles: usize,
    pub penalty: f64,
    pub train_cv_error: f64,
    pub test_error: f64,
}

impl std::fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}\t{:.3} ({}, {})\tC={:e}\tcv={:.3}",
            self.dataset, self.test_error, self.size, self.quantiles, self.penalty, self.train_cv_error
        )
    }
}

/// Model selection on the training pool, then test error.
pub fn classify_dataset(
    dataset: &Dataset,
    grid: &SelectionGrid,
    seed: u64,
) -> Result<(ClassificationReport, Selection)> {
    let sel = model_select(&dataset.train, grid, seed)?;
    let test_error = evaluate(&sel.model, &dataset.test, sel.best.size, sel.best.quantiles, sel.mode)?;
    Ok((
        ClassificationReport {
            dataset: dataset.name.clone(),
            size: sel.best.size,
            quantiles: sel.best.quantiles,
            penalty: sel.best.penalty,
            train_cv_error: sel.best.cv_error,
            test_error,
        },
        sel,
    ))
}
