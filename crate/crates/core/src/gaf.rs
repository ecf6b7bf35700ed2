//! Polar encoding and Gramian Angular Fields.
//!
//! With `phi_i = arccos(x_i)` on a rescaled series, the summation field is
//! `cos(phi_i + phi_j)` and the difference field is `sin(phi_i - phi_j)`.
//! Both are evaluated in their algebraic form, which needs no trig calls:
//!
//! ```text
//! GASF[i][j] = x_i x_j - sqrt(1 - x_i^2) sqrt(1 - x_j^2)
//! GADF[i][j] = sqrt(1 - x_i^2) x_j - x_i sqrt(1 - x_j^2)
//! ```

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{check_values, paa, rescale, PaaConfig, RescaleMode, ScaledSeries, TimeSeries};

/// Values this far outside `[-1, 1]` are treated as floating-point drift and
/// clamped before `arccos`/`sqrt`.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Gasf,
    Gadf,
    Mtf,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Gasf => "GASF",
            FieldKind::Gadf => "GADF",
            FieldKind::Mtf => "MTF",
        }
    }

    /// Value range of the cells, also used as the pixel domain.
    pub fn range(self) -> (f64, f64) {
        match self {
            FieldKind::Gasf | FieldKind::Gadf => (-1.0, 1.0),
            FieldKind::Mtf => (0.0, 1.0),
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "GASF" => Ok(FieldKind::Gasf),
            "GADF" => Ok(FieldKind::Gadf),
            "MTF" => Ok(FieldKind::Mtf),
            other => Err(format!("unknown field kind '{other}'")),
        }
    }
}

/// A square field image tagged with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix {
    pub kind: FieldKind,
    pub cells: Array2<f64>,
    /// Rescale mode of the source series; `None` for MTF.
    pub rescale_mode: Option<RescaleMode>,
}

impl FieldMatrix {
    pub fn size(&self) -> usize {
        self.cells.nrows()
    }

    /// Checks the per-kind invariants: squareness, cell range, and
    /// (anti)symmetry for the Gramian kinds. `tol` bounds every comparison.
    pub fn check_invariants(&self, tol: f64) -> std::result::Result<(), String> {
        let (rows, cols) = self.cells.dim();
        if rows != cols {
            return Err(format!("{rows}x{cols} matrix is not square"));
        }
        let (lo, hi) = self.kind.range();
        for ((i, j), &v) in self.cells.indexed_iter() {
            if !v.is_finite() || v < lo - tol || v > hi + tol {
                return Err(format!("cell ({i},{j}) = {v} outside [{lo}, {hi}]"));
            }
            let mirrored = self.cells[[j, i]];
            match self.kind {
                FieldKind::Gasf if (v - mirrored).abs() > tol => {
                    return Err(format!("GASF not symmetric at ({i},{j})"));
                }
                FieldKind::Gadf if (v + mirrored).abs() > tol => {
                    return Err(format!("GADF not antisymmetric at ({i},{j})"));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Row-major cell values.
    pub fn flatten(&self) -> Vec<f64> {
        self.cells.iter().copied().collect()
    }
}

/// Angles and radii of a rescaled series in polar coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSeries {
    pub phi: Vec<f64>,
    pub r: Vec<f64>,
    pub span_constant: f64,
}

fn clamp_cosine(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            if v.is_finite() && (-1.0 - CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&v) {
                Ok(v.clamp(-1.0, 1.0))
            } else {
                Err(Error::OutOfRange {
                    index,
                    value: v,
                    lo: -1.0,
                    hi: 1.0,
                })
            }
        })
        .collect()
}

/// Polar encoding: `phi_i = arccos(x_i)`, `r_i = (i + 1) / N`.
///
/// `span_constant` defaults to the series length, which puts the radii in
/// `(0, 1]`. The radius plays no part in the field values.
pub fn to_polar(scaled: &ScaledSeries, span_constant: Option<f64>) -> Result<PolarSeries> {
    let x = clamp_cosine(&scaled.values)?;
    let n = span_constant.unwrap_or(x.len() as f64);
    Ok(PolarSeries {
        phi: x.iter().map(|v| v.acos()).collect(),
        r: (1..=x.len()).map(|t| t as f64 / n).collect(),
        span_constant: n,
    })
}

fn gram_parts(scaled: &ScaledSeries) -> Result<(Vec<f64>, Vec<f64>)> {
    check_values(&scaled.values)?;
    let x = clamp_cosine(&scaled.values)?;
    let s = x.iter().map(|v| (1.0 - v * v).sqrt()).collect();
    Ok((x, s))
}

/// Gramian Angular Summation Field, `cos(phi_i + phi_j)`.
pub fn gasf(scaled: &ScaledSeries) -> Result<FieldMatrix> {
    let (x, s) = gram_parts(scaled)?;
    let n = x.len();
    Ok(FieldMatrix {
        kind: FieldKind::Gasf,
        cells: Array2::from_shape_fn((n, n), |(i, j)| x[i] * x[j] - s[i] * s[j]),
        rescale_mode: Some(scaled.mode),
    })
}

/// Gramian Angular Difference Field, `sin(phi_i - phi_j)`.
pub fn gadf(scaled: &ScaledSeries) -> Result<FieldMatrix> {
    let (x, s) = gram_parts(scaled)?;
    let n = x.len();
    Ok(FieldMatrix {
        kind: FieldKind::Gadf,
        cells: Array2::from_shape_fn((n, n), |(i, j)| s[i] * x[j] - x[i] * s[j]),
        rescale_mode: Some(scaled.mode),
    })
}

/// Rescale, PAA down to `paa.segments` points, then build the requested
/// Gramian field. `paa.segments == series.len()` means no smoothing.
pub fn encode_gaf(
    series: &TimeSeries,
    mode: RescaleMode,
    paa_config: PaaConfig,
    kind: FieldKind,
) -> Result<FieldMatrix> {
    let scaled = rescale(series, mode)?;
    let smoothed = scaled.with_values(paa(&scaled.values, paa_config)?);
    match kind {
        FieldKind::Gasf => gasf(&smoothed),
        FieldKind::Gadf => gadf(&smoothed),
        FieldKind::Mtf => Err(Error::KindMismatch {
            expected: "GASF or GADF",
            found: "MTF",
        }),
    }
}

/// [`encode_gaf`] over many series; results come back in input order.
pub fn encode_gaf_batch(
    series: &[TimeSeries],
    mode: RescaleMode,
    paa_config: PaaConfig,
    kind: FieldKind,
) -> Result<Vec<FieldMatrix>> {
    series
        .par_iter()
        .map(|ts| encode_gaf(ts, mode, paa_config, kind))
        .collect()
}
