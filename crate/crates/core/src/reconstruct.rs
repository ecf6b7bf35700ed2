//! Inverse of the unit-mode GASF.
//!
//! The GASF diagonal holds `cos(2 phi_i)`. For a `[0, 1]` rescaled series
//! `phi_i` lies in `[0, pi/2]`, where `cos(phi) = sqrt((cos(2 phi) + 1) / 2)`
//! has a unique solution, so the diagonal alone recovers the series.
//! Symmetric-mode fields have an ambiguous inverse and are refused.

use crate::error::{Error, Result};
use crate::gaf::{FieldKind, FieldMatrix, CLAMP_TOLERANCE};
use crate::series::{RescaleMode, ScaledSeries};

pub fn diagonal(field: &FieldMatrix) -> Result<Vec<f64>> {
    let (rows, cols) = field.cells.dim();
    if rows != cols {
        return Err(Error::DimMismatch {
            expected: rows,
            found: cols,
        });
    }
    Ok(field.cells.diag().to_vec())
}

/// Maps GASF diagonal entries back to unit-rescaled values. Entries within
/// `1e-9` outside `[-1, 1]` are clamped; anything further is an error.
///
/// The returned series has placeholder origin `(0, 1)`; callers holding the
/// source bounds should overwrite it.
pub fn inverse_gasf_diagonal(diag: &[f64]) -> Result<ScaledSeries> {
    let values = diag
        .iter()
        .enumerate()
        .map(|(index, &g)| {
            if !(-1.0 - CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&g) {
                return Err(Error::OutOfRange {
                    index,
                    value: g,
                    lo: -1.0,
                    hi: 1.0,
                });
            }
            Ok(((g.clamp(-1.0, 1.0) + 1.0) / 2.0).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScaledSeries {
        values,
        mode: RescaleMode::Unit,
        origin: (0.0, 1.0),
    })
}

/// Recovers the unit-rescaled series behind a GASF.
pub fn reconstruct_series(field: &FieldMatrix) -> Result<ScaledSeries> {
    if field.kind != FieldKind::Gasf {
        return Err(Error::KindMismatch {
            expected: "GASF",
            found: field.kind.name(),
        });
    }
    if field.rescale_mode != Some(RescaleMode::Unit) {
        return Err(Error::NotInvertible);
    }
    inverse_gasf_diagonal(&diagonal(field)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaf::gasf;
    use ndarray::array;

    fn unit(values: &[f64]) -> ScaledSeries {
        ScaledSeries {
            values: values.to_vec(),
            mode: RescaleMode::Unit,
            origin: (0.0, 1.0),
        }
    }

    fn gasf_field(cells: ndarray::Array2<f64>, mode: RescaleMode) -> FieldMatrix {
        FieldMatrix {
            kind: FieldKind::Gasf,
            cells,
            rescale_mode: Some(mode),
        }
    }

    #[test]
    fn diagonal_examples() {
        let f = gasf_field(array![[1.0, 0.5], [0.5, -0.5]], RescaleMode::Unit);
        assert_eq!(diagonal(&f).unwrap(), vec![1.0, -0.5]);
        assert_eq!(diagonal(&gasf(&unit(&[1.0, 1.0])).unwrap()).unwrap(), vec![1.0, 1.0]);
        let d = diagonal(&gasf(&unit(&[1.0, 0.5, 0.0])).unwrap()).unwrap();
        for (a, b) in d.iter().zip([1.0, -0.5, -1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            inverse_gasf_diagonal(&[1.0, -0.5, -1.0]).unwrap().values,
            vec![1.0, 0.5, 0.0]
        );
        assert_eq!(inverse_gasf_diagonal(&[-1.0]).unwrap().values, vec![0.0]);
        assert!(matches!(
            inverse_gasf_diagonal(&[1.5]),
            Err(Error::OutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn round_trip_small() {
        let x = [0.2, 0.9, 0.4];
        let back = reconstruct_series(&gasf(&unit(&x)).unwrap()).unwrap();
        for (a, b) in back.values.iter().zip(x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_mode_refused() {
        let f = gasf_field(array![[1.0, 0.0], [0.0, -1.0]], RescaleMode::Symmetric);
        assert!(matches!(reconstruct_series(&f), Err(Error::NotInvertible)));
    }

    #[test]
    fn drift_within_tolerance_is_clamped() {
        let f = gasf_field(array![[1.0 + 5e-10, 0.0], [0.0, -1.0 - 5e-10]], RescaleMode::Unit);
        assert_eq!(reconstruct_series(&f).unwrap().values, vec![1.0, 0.0]);
    }

    #[test]
    fn inverse_is_strictly_increasing() {
        let grid: Vec<f64> = (0..=200).map(|k| -1.0 + k as f64 / 100.0).collect();
        let out = inverse_gasf_diagonal(&grid).unwrap().values;
        assert!(out.windows(2).all(|w| w[1] > w[0]));
    }
}
