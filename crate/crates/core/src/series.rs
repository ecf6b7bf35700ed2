//! Series types, min-max rescaling and piecewise aggregate approximation.
//!
//! Pipelines always run rescale, then PAA, then an encoder. PAA of values in
//! `[0, 1]` stays in `[0, 1]`, so no second rescale is needed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A univariate series of real observations with an optional class label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub values: Vec<f64>,
    pub label: Option<i64>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, label: None }
    }

    pub fn labeled(values: Vec<f64>, label: i64) -> Self {
        Self {
            values,
            label: Some(label),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks the preconditions shared by every encoder: at least two
    /// points, all finite.
    pub fn check_encodable(&self) -> Result<()> {
        check_values(&self.values)
    }
}

pub(crate) fn check_values(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::TooShort {
            len: values.len(),
            min: 2,
        });
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Target interval of a min-max rescale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RescaleMode {
    /// `[0, 1]`
    Unit,
    /// `[-1, 1]`
    Symmetric,
}

impl RescaleMode {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            RescaleMode::Unit => (0.0, 1.0),
            RescaleMode::Symmetric => (-1.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RescaleMode::Unit => "unit",
            RescaleMode::Symmetric => "symmetric",
        }
    }
}

impl std::str::FromStr for RescaleMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "unit" => Ok(RescaleMode::Unit),
            "symmetric" => Ok(RescaleMode::Symmetric),
            other => Err(format!("unknown rescale mode '{other}'")),
        }
    }
}

/// A series rescaled into the interval of `mode`, remembering the
/// `(min, max)` of its source so raw units can be restored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledSeries {
    pub values: Vec<f64>,
    pub mode: RescaleMode,
    pub origin: (f64, f64),
}

impl ScaledSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Undoes the rescale using the recorded source bounds.
    pub fn to_raw(&self) -> Vec<f64> {
        let (min, max) = self.origin;
        let span = max - min;
        self.values
            .iter()
            .map(|&v| match self.mode {
                RescaleMode::Unit => v * span + min,
                RescaleMode::Symmetric => (v + 1.0) / 2.0 * span + min,
            })
            .collect()
    }

    /// Same series, values replaced (e.g. by PAA); mode and origin kept.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            values,
            mode: self.mode,
            origin: self.origin,
        }
    }
}

/// Returns `(min, max)` of a non-empty slice.
pub fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    })
}

/// Min-max rescale of `series` into the interval of `mode`.
///
/// The symmetric form is `((x - max) + (x - min)) / (max - min)`.
pub fn rescale(series: &TimeSeries, mode: RescaleMode) -> Result<ScaledSeries> {
    series.check_encodable()?;
    let bounds = min_max(&series.values);
    if bounds.1 <= bounds.0 {
        return Err(Error::ConstantSeries);
    }
    Ok(ScaledSeries {
        values: series.values.iter().map(|&x| rescale_value(x, bounds, mode)).collect(),
        mode,
        origin: bounds,
    })
}

/// Rescales `values` with externally supplied bounds (typically those of a
/// clean series whose corrupted copy is being encoded). Results falling
/// outside the mode's interval are clamped onto it.
pub fn rescale_with_bounds(values: &[f64], bounds: (f64, f64), mode: RescaleMode) -> Result<ScaledSeries> {
    check_values(values)?;
    if bounds.0.is_nan() || bounds.1.is_nan() || bounds.1 <= bounds.0 {
        return Err(Error::ConstantSeries);
    }
    let (lo, hi) = mode.bounds();
    Ok(ScaledSeries {
        values: values
            .iter()
            .map(|&x| rescale_value(x, bounds, mode).clamp(lo, hi))
            .collect(),
        mode,
        origin: bounds,
    })
}

fn rescale_value(x: f64, (min, max): (f64, f64), mode: RescaleMode) -> f64 {
    match mode {
        RescaleMode::Unit => (x - min) / (max - min),
        RescaleMode::Symmetric => ((x - max) + (x - min)) / (max - min),
    }
}

/// Number of PAA segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaaConfig {
    pub segments: usize,
}

impl PaaConfig {
    pub fn new(segments: usize) -> Self {
        Self { segments }
    }
}

/// Half-open index range `[start, end)` covered by segment `b` of `segments`
/// over a series of length `n`.
pub fn paa_segment(b: usize, segments: usize, n: usize) -> std::ops::Range<usize> {
    (b * n / segments)..((b + 1) * n / segments)
}

/// Piecewise aggregate approximation: the mean of each of `S` adjacent,
/// non-overlapping windows. Segment `b` covers `[floor(b*n/S), floor((b+1)*n/S))`.
pub fn paa(values: &[f64], config: PaaConfig) -> Result<Vec<f64>> {
    let n = values.len();
    let s = config.segments;
    if s < 1 || s > n {
        return Err(Error::InvalidSegments { segments: s, len: n });
    }
    if s == n {
        return Ok(values.to_vec());
    }
    Ok((0..s)
        .map(|b| {
            let seg = &values[paa_segment(b, s, n)];
            seg.iter().sum::<f64>() / seg.len() as f64
        })
        .collect())
}
