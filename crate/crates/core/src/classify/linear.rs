//! One-vs-rest linear soft-margin SVM.
//!
//! Each class gets an L2-regularized hinge-loss problem
//! `min  lambda/2 |w|^2 + 1/N sum max(0, 1 - y_i w.x_i)` with
//! `lambda = 1 / (C N)`, solved by projected stochastic subgradient steps
//! `eta_t = 1 / (lambda t)` (Pegasos). The bias is an extra constant feature
//! and is regularized along with the weights. Samples are visited in one
//! seeded permutation that stays fixed across epochs.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub const DEFAULT_EPOCHS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// Sorted class ids; row `k` of `weights` scores `classes[k]`.
    pub classes: Vec<i64>,
    /// `K x (D + 1)`, bias in the last column.
    pub weights: Array2<f64>,
    pub penalty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmConfig {
    pub epochs: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self { epochs: DEFAULT_EPOCHS }
    }
}

impl LinearModel {
    pub fn feature_dim(&self) -> usize {
        self.weights.ncols() - 1
    }

    pub fn scores(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let d = self.feature_dim();
        self.weights
            .rows()
            .into_iter()
            .map(|w| w.slice(ndarray::s![..d]).dot(&x) + w[d])
            .collect()
    }

    /// Highest-scoring class; ties go to the lowest class id.
    pub fn predict(&self, x: ArrayView1<f64>) -> i64 {
        let scores = self.scores(x);
        let mut best = 0;
        for k in 1..scores.len() {
            if scores[k] > scores[best] {
                best = k;
            }
        }
        self.classes[best]
    }

    pub fn predict_all(&self, x: ArrayView2<f64>) -> Vec<i64> {
        x.rows().into_iter().map(|r| self.predict(r)).collect()
    }
}

fn sorted_classes(labels: &[i64]) -> Vec<i64> {
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    classes
}

/// Trains one binary Pegasos problem; `y` holds +1/-1.
fn pegasos(x: &ArrayView2<f64>, y: &[f64], lambda: f64, order: &[usize], epochs: usize) -> Array1<f64> {
    let d = x.ncols();
    // w = scale * v, bias is coordinate d of v
    let mut v = Array1::<f64>::zeros(d + 1);
    let mut scale = 1.0;
    let mut norm_sq = 0.0;
    let radius_sq = 1.0 / lambda;
    let mut t = 0usize;
    for _ in 0..epochs {
        for &i in order {
            t += 1;
            let xi = x.row(i);
            let margin = y[i] * scale * (v.slice(ndarray::s![..d]).dot(&xi) + v[d]);
            let eta = 1.0 / (lambda * t as f64);
            let shrink = 1.0 - eta * lambda;
            if shrink <= 0.0 {
                v.fill(0.0);
                scale = 1.0;
                norm_sq = 0.0;
            } else {
                scale *= shrink;
            }
            if margin < 1.0 {
                let step = eta * y[i] / scale;
                let vx = v.slice(ndarray::s![..d]).dot(&xi) + v[d];
                let xx = xi.dot(&xi) + 1.0;
                v.slice_mut(ndarray::s![..d]).scaled_add(step, &xi);
                v[d] += step;
                norm_sq += 2.0 * step * vx + step * step * xx;
            }
            let w_norm_sq = scale * scale * norm_sq;
            if w_norm_sq > radius_sq {
                scale *= (radius_sq / w_norm_sq).sqrt();
            }
            if !(1e-100..=1e100).contains(&scale) {
                v *= scale;
                norm_sq = v.dot(&v);
                scale = 1.0;
            }
        }
    }
    v * scale
}

/// One-vs-rest fit on `features` (`N x D`).
pub fn fit_linear(
    features: ArrayView2<f64>,
    labels: &[i64],
    penalty: f64,
    seed: u64,
    cfg: &SvmConfig,
) -> Result<LinearModel> {
    if features.nrows() != labels.len() {
        return Err(Error::DimMismatch {
            expected: features.nrows(),
            found: labels.len(),
        });
    }
    if penalty.is_nan() || penalty <= 0.0 || cfg.epochs == 0 {
        return Err(Error::InvalidConfig(format!(
            "penalty {penalty}, epochs {}",
            cfg.epochs
        )));
    }
    let classes = sorted_classes(labels);
    if classes.len() < 2 {
        return Err(Error::SingleClass);
    }
    let n = labels.len();
    let lambda = 1.0 / (penalty * n as f64);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::seeded(seed));

    let mut weights = Array2::zeros((classes.len(), features.ncols() + 1));
    for (k, &class) in classes.iter().enumerate() {
        let y: Vec<f64> = labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
        weights
            .row_mut(k)
            .assign(&pegasos(&features, &y, lambda, &order, cfg.epochs));
    }
    Ok(LinearModel {
        classes,
        weights,
        penalty,
    })
}

/// Fraction of rows of `features` whose prediction differs from `labels`.
pub fn error_rate(model: &LinearModel, features: ArrayView2<f64>, labels: &[i64]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let wrong = model
        .predict_all(features)
        .iter()
        .zip(labels)
        .filter(|(p, l)| p != l)
        .count();
    Ok(wrong as f64 / labels.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng as _;

    #[test]
    fn separable_toy_set_is_learned() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..10 {
            rows.extend([1.0, 0.0]);
            labels.push(0);
            rows.extend([0.0, 1.0]);
            labels.push(1);
        }
        let x = Array2::from_shape_vec((20, 2), rows).unwrap();
        let m = fit_linear(x.view(), &labels, 1.0, 0, &SvmConfig::default()).unwrap();
        assert_eq!(error_rate(&m, x.view(), &labels).unwrap(), 0.0);
    }

    #[test]
    fn penalty_changes_the_model() {
        let mut r = rng::seeded(3);
        let x = Array2::from_shape_simple_fn((40, 3), || r.random_range(-1.0..1.0));
        let labels: Vec<i64> = (0..40)
            .map(|i| i64::from(x[[i, 0]] + 0.5 * r.random_range(-1.0..1.0) > 0.0))
            .collect();
        let cfg = SvmConfig::default();
        let weak = fit_linear(x.view(), &labels, 1e-4, 1, &cfg).unwrap();
        let strong = fit_linear(x.view(), &labels, 1e4, 1, &cfg).unwrap();
        assert_ne!(weak.weights, strong.weights);
        assert!(
            weak.weights.iter().map(|w| w.abs()).sum::<f64>() < strong.weights.iter().map(|w| w.abs()).sum::<f64>()
        );
    }

    #[test]
    fn single_class_rejected() {
        let x = array![[1.0], [2.0]];
        assert!(matches!(
            fit_linear(x.view(), &[3, 3], 1.0, 0, &SvmConfig::default()),
            Err(Error::SingleClass)
        ));
    }

    #[test]
    fn ties_go_to_lowest_class() {
        let m = LinearModel {
            classes: vec![2, 5, 9],
            weights: Array2::zeros((3, 3)),
            penalty: 1.0,
        };
        assert_eq!(m.predict(array![0.3, -0.2].view()), 2);
    }

    #[test]
    fn multiclass_blobs() {
        let centers = [[2.0, 0.0], [-2.0, 0.0], [0.0, 2.5]];
        let mut r = rng::seeded(9);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..60 {
            let c = centers[i % 3];
            rows.push(c[0] + r.random_range(-0.5..0.5));
            rows.push(c[1] + r.random_range(-0.5..0.5));
            labels.push((i % 3) as i64 + 10);
        }
        let x = Array2::from_shape_vec((60, 2), rows).unwrap();
        let m = fit_linear(x.view(), &labels, 10.0, 0, &SvmConfig::default()).unwrap();
        assert_eq!(m.classes, vec![10, 11, 12]);
        assert_eq!(error_rate(&m, x.view(), &labels).unwrap(), 0.0);
    }
}
