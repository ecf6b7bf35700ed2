//! Single-hidden-layer denoising autoencoder.
//!
//! `y = W_dec * sigmoid(W_enc * x + b_enc) + b_dec` with untied weights and a
//! linear output (GASF targets span `[-1, 1]`). Training minimizes the mean
//! squared error over every output element with plain mini-batch gradient
//! descent in fixed sample order.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DaModel {
    /// `h x d`
    pub enc_w: Array2<f64>,
    pub enc_b: Array1<f64>,
    /// `d x h`
    pub dec_w: Array2<f64>,
    pub dec_b: Array1<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub batch_size: usize,
    /// Training stops once the epoch MSE changes by less than this.
    pub tolerance: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            batch_size: 20,
            tolerance: 1e-3,
            learning_rate: 0.1,
            max_epochs: 5000,
        }
    }
}

/// Gradients of the MSE loss, one block per parameter.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub enc_w: Array2<f64>,
    pub enc_b: Array1<f64>,
    pub dec_w: Array2<f64>,
    pub dec_b: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    /// Training-set MSE before the first update.
    pub initial_mse: f64,
    /// Mean batch MSE of each epoch.
    pub history: Vec<f64>,
    /// Whether the tolerance rule stopped training before `max_epochs`.
    pub converged: bool,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl DaModel {
    /// Uniform init in `±4 sqrt(6 / (d + h))`, zero biases.
    pub fn init(input_dim: usize, hidden_dim: usize, seed: u64) -> Result<Self> {
        if input_dim == 0 || hidden_dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "autoencoder dims must be positive (d={input_dim}, h={hidden_dim})"
            )));
        }
        let bound = 4.0 * (6.0 / (input_dim + hidden_dim) as f64).sqrt();
        let dist = Uniform::new_inclusive(-bound, bound).expect("finite bound");
        let mut rng = rng::seeded(seed);
        let enc_w = Array2::from_shape_simple_fn((hidden_dim, input_dim), || dist.sample(&mut rng));
        let dec_w = Array2::from_shape_simple_fn((input_dim, hidden_dim), || dist.sample(&mut rng));
        Ok(Self {
            enc_w,
            enc_b: Array1::zeros(hidden_dim),
            dec_w,
            dec_b: Array1::zeros(input_dim),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.enc_w.ncols()
    }

    pub fn hidden_dim(&self) -> usize {
        self.enc_w.nrows()
    }

    fn check_batch(&self, x: &ArrayView2<f64>) -> Result<()> {
        if x.ncols() != self.input_dim() {
            return Err(Error::DimMismatch {
                expected: self.input_dim(),
                found: x.ncols(),
            });
        }
        Ok(())
    }

    fn hidden(&self, x: &ArrayView2<f64>) -> Array2<f64> {
        let mut z = x.dot(&self.enc_w.t());
        z += &self.enc_b;
        z.mapv_inplace(sigmoid);
        z
    }

    fn output(&self, hidden: &Array2<f64>) -> Array2<f64> {
        let mut y = hidden.dot(&self.dec_w.t());
        y += &self.dec_b;
        y
    }

    pub fn forward(&self, v: ArrayView1<f64>) -> Result<Array1<f64>> {
        let x = v.insert_axis(Axis(0));
        Ok(self.forward_batch(x)?.index_axis_move(Axis(0), 0))
    }

    /// Row-wise forward pass over a `batch x d` matrix.
    pub fn forward_batch(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_batch(&x)?;
        Ok(self.output(&self.hidden(&x)))
    }

    /// Mean squared error of the reconstructions of `x` against `targets`.
    pub fn mse(&self, x: ArrayView2<f64>, targets: ArrayView2<f64>) -> Result<f64> {
        check_pairs(self, &x, &targets)?;
        let diff = self.forward_batch(x)? - targets;
        Ok(diff.mapv(|e| e * e).mean().unwrap_or(0.0))
    }

    /// MSE loss over the batch and its analytic gradients.
    pub fn loss_and_gradients(&self, x: ArrayView2<f64>, targets: ArrayView2<f64>) -> Result<(f64, Gradients)> {
        check_pairs(self, &x, &targets)?;
        let h = self.hidden(&x);
        let mut delta = self.output(&h) - targets;
        let count = delta.len() as f64;
        let loss = delta.iter().map(|e| e * e).sum::<f64>() / count;
        delta *= 2.0 / count;

        let dec_w = delta.t().dot(&h);
        let dec_b = delta.sum_axis(Axis(0));
        let mut dh = delta.dot(&self.dec_w);
        dh.zip_mut_with(&h, |g, &a| *g *= a * (1.0 - a));
        let enc_w = dh.t().dot(&x);
        let enc_b = dh.sum_axis(Axis(0));
        Ok((
            loss,
            Gradients {
                enc_w,
                enc_b,
                dec_w,
                dec_b,
            },
        ))
    }

    fn step(&mut self, g: &Gradients, lr: f64) {
        self.enc_w.scaled_add(-lr, &g.enc_w);
        self.enc_b.scaled_add(-lr, &g.enc_b);
        self.dec_w.scaled_add(-lr, &g.dec_w);
        self.dec_b.scaled_add(-lr, &g.dec_b);
    }

    /// Mini-batch gradient descent on `(inputs, targets)` rows.
    ///
    /// Batches are taken in dataset order every epoch. Training stops when
    /// two consecutive epoch MSEs differ by less than `cfg.tolerance`, or
    /// after `cfg.max_epochs`. `progress` receives `(epoch, mse)` after
    /// every epoch.
    pub fn train(
        &mut self,
        inputs: ArrayView2<f64>,
        targets: ArrayView2<f64>,
        cfg: &TrainConfig,
        mut progress: impl FnMut(usize, f64),
    ) -> Result<TrainOutcome> {
        check_pairs(self, &inputs, &targets)?;
        if inputs.nrows() == 0 {
            return Err(Error::InvalidConfig("no training pairs".into()));
        }
        if cfg.batch_size == 0
            || cfg.tolerance.is_nan()
            || cfg.tolerance <= 0.0
            || cfg.learning_rate.is_nan()
            || cfg.learning_rate <= 0.0
            || cfg.max_epochs == 0
        {
            return Err(Error::InvalidConfig(format!("{cfg:?}")));
        }
        let initial_mse = self.mse(inputs, targets)?;
        let rows = inputs.nrows();
        let mut history = Vec::new();
        let mut converged = false;
        for epoch in 1..=cfg.max_epochs {
            let mut total = 0.0;
            for start in (0..rows).step_by(cfg.batch_size) {
                let end = (start + cfg.batch_size).min(rows);
                let x = inputs.slice(ndarray::s![start..end, ..]);
                let t = targets.slice(ndarray::s![start..end, ..]);
                let (loss, grads) = self.loss_and_gradients(x, t)?;
                if !loss.is_finite() {
                    return Err(Error::DivergenceDetected { epoch });
                }
                total += loss * (end - start) as f64;
                self.step(&grads, cfg.learning_rate);
            }
            let mse = total / rows as f64;
            progress(epoch, mse);
            let done = history
                .last()
                .is_some_and(|&prev: &f64| (mse - prev).abs() < cfg.tolerance);
            history.push(mse);
            if done {
                converged = true;
                break;
            }
        }
        if self.enc_w.iter().chain(self.dec_w.iter()).any(|w| !w.is_finite()) {
            return Err(Error::DivergenceDetected { epoch: history.len() });
        }
        Ok(TrainOutcome {
            initial_mse,
            history,
            converged,
        })
    }
}

fn check_pairs(model: &DaModel, x: &ArrayView2<f64>, t: &ArrayView2<f64>) -> Result<()> {
    model.check_batch(x)?;
    if t.ncols() != model.input_dim() {
        return Err(Error::DimMismatch {
            expected: model.input_dim(),
            found: t.ncols(),
        });
    }
    if t.nrows() != x.nrows() {
        return Err(Error::DimMismatch {
            expected: x.nrows(),
            found: t.nrows(),
        });
    }
    Ok(())
}
