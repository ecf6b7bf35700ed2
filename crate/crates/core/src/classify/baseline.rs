//! 1-nearest-neighbour classification under Euclidean distance on raw values.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Label of the nearest training series; distance ties keep the earliest.
pub fn nearest_label(train: &[TimeSeries], query: &[f64]) -> Option<i64> {
    let mut best: Option<(f64, &TimeSeries)> = None;
    for ts in train {
        let d = squared_distance(&ts.values, query);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, ts));
        }
    }
    best.and_then(|(_, ts)| ts.label)
}

/// Error rate of 1NN-Euclidean on `test`.
pub fn baseline_1nn(train: &[TimeSeries], test: &[TimeSeries]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let Some(first) = train.first() else {
        return Err(Error::InvalidConfig("1NN needs at least one training series".into()));
    };
    let n = first.len();
    if let Some(bad) = train.iter().chain(test).find(|ts| ts.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let wrong = test
        .iter()
        .filter(|ts| nearest_label(train, &ts.values) != ts.label)
        .count();
    Ok(wrong as f64 / test.len() as f64)
}
