//! Markov Transition Fields.
//!
//! A series is discretized into `Q` quantile bins, first-order transitions
//! between consecutive bins are counted into a row-stochastic `Q x Q` matrix
//! `W` (`W[a][b] = P(next in b | current in a)`), and `W` is spread over
//! time: `MTF[i][j] = W[bin(i)][bin(j)]`. Rows of `W` for bins with no
//! outgoing transition stay all-zero, so MTF lookups through them yield 0.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaf::{FieldKind, FieldMatrix};
use crate::series::{check_values, TimeSeries};

/// Bin index per time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantileBinning {
    pub num_bins: usize,
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMatrix {
    pub probs: Array2<f64>,
}

impl MarkovMatrix {
    pub fn size(&self) -> usize {
        self.probs.nrows()
    }
}

/// Rank-based quantile binning.
///
/// Time steps are stable-sorted by value and sorted position `p` goes to bin
/// `min(Q - 1, floor(p * Q / n))`. Every bin gets `floor(n/Q)` or
/// `ceil(n/Q)` points and ties are split by original order, so flat
/// stretches still occupy distinct bins.
pub fn quantile_bins(values: &[f64], num_bins: usize) -> Result<QuantileBinning> {
    let n = values.len();
    if num_bins < 2 || num_bins > n {
        return Err(Error::InvalidBinCount { bins: num_bins, len: n });
    }
    check_values(values)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut assignment = vec![0; n];
    for (p, &idx) in order.iter().enumerate() {
        assignment[idx] = (p * num_bins / n).min(num_bins - 1);
    }
    Ok(QuantileBinning { num_bins, assignment })
}

/// Counts consecutive bin transitions and row-normalizes them.
pub fn markov_matrix(binning: &QuantileBinning) -> Result<MarkovMatrix> {
    let a = &binning.assignment;
    if a.len() < 2 {
        return Err(Error::TooShort { len: a.len(), min: 2 });
    }
    let q = binning.num_bins;
    let mut counts = Array2::<f64>::zeros((q, q));
    for pair in a.windows(2) {
        counts[[pair[0], pair[1]]] += 1.0;
    }
    for mut row in counts.rows_mut() {
        let total: f64 = row.sum();
        if total > 0.0 {
            row /= total;
        }
    }
    Ok(MarkovMatrix { probs: counts })
}

/// `MTF[i][j] = W[bin(i)][bin(j)]` for every pair of time steps.
pub fn mtf(binning: &QuantileBinning, w: &MarkovMatrix) -> Result<FieldMatrix> {
    if w.size() != binning.num_bins {
        return Err(Error::DimMismatch {
            expected: binning.num_bins,
            found: w.size(),
        });
    }
    let a = &binning.assignment;
    let n = a.len();
    Ok(FieldMatrix {
        kind: FieldKind::Mtf,
        cells: Array2::from_shape_fn((n, n), |(i, j)| w.probs[[a[i], a[j]]]),
        rescale_mode: None,
    })
}

/// Patch width used to shrink an `n x n` field towards `target` pixels.
pub fn blur_width(n: usize, target: usize) -> usize {
    n.div_ceil(target)
}

/// Averages non-overlapping `m x m` patches, `m = ceil(n / target)`.
///
/// The final patch along each axis may be narrower than `m`; it is averaged
/// over the cells it actually covers. The output is `ceil(n/m)` wide, which
/// can fall short of `target`.
pub fn aggregate(field: &FieldMatrix, target: usize) -> Result<FieldMatrix> {
    let n = field.size();
    if target < 1 || target > n {
        return Err(Error::InvalidTargetSize { target, len: n });
    }
    let m = blur_width(n, target);
    if m == 1 {
        return Ok(field.clone());
    }
    let out = n.div_ceil(m);
    let cells = Array2::from_shape_fn((out, out), |(a, b)| {
        let rows = a * m..((a + 1) * m).min(n);
        let cols = b * m..((b + 1) * m).min(n);
        let count = (rows.len() * cols.len()) as f64;
        field.cells.slice(ndarray::s![rows, cols]).sum() / count
    });
    Ok(FieldMatrix {
        kind: field.kind,
        cells,
        rescale_mode: field.rescale_mode,
    })
}

/// Quantile binning, transition matrix, MTF, then blur down to `target_size`.
pub fn encode_mtf(series: &TimeSeries, num_bins: usize, target_size: usize) -> Result<FieldMatrix> {
    series.check_encodable()?;
    let binning = quantile_bins(&series.values, num_bins)?;
    let w = markov_matrix(&binning)?;
    aggregate(&mtf(&binning, &w)?, target_size)
}

/// [`encode_mtf`] over many series, results in input order.
pub fn encode_mtf_batch(series: &[TimeSeries], num_bins: usize, target_size: usize) -> Result<Vec<FieldMatrix>> {
    series
        .par_iter()
        .map(|ts| encode_mtf(ts, num_bins, target_size))
        .collect()
}
