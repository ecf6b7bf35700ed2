//! Datasets: UCR-format parsing, seeded synthetic generators and merging.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::series::TimeSeries;

/// Labeled train/test pools of equal-length series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub train: Vec<TimeSeries>,
    pub test: Vec<TimeSeries>,
    pub series_length: usize,
}

impl Dataset {
    /// Builds a dataset, checking that every series is labeled and that all
    /// share one length.
    pub fn new(name: impl Into<String>, train: Vec<TimeSeries>, test: Vec<TimeSeries>) -> Result<Self> {
        let series_length = train.iter().chain(&test).map(TimeSeries::len).next().unwrap_or(0);
        for (index, ts) in train.iter().chain(&test).enumerate() {
            if ts.len() != series_length {
                return Err(Error::LengthMismatch {
                    expected: series_length,
                    found: ts.len(),
                });
            }
            if ts.label.is_none() {
                return Err(Error::Unlabeled { index });
            }
        }
        Ok(Self {
            name: name.into(),
            train,
            test,
            series_length,
        })
    }
}

fn malformed(path: &str, line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine {
        path: path.to_string(),
        line,
        reason: reason.into(),
    }
}

/// Parses UCR text: one series per non-empty line, label first. The
/// delimiter (comma or whitespace) is sniffed from the first line and every
/// line must carry as many fields as the first. Real-valued labels such as
/// `1.0` are truncated to integers.
pub fn parse_ucr_str(text: &str, source: &str) -> Result<Vec<TimeSeries>> {
    let mut out = Vec::new();
    let mut comma = None;
    let mut width = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let comma = *comma.get_or_insert_with(|| line.contains(','));
        let fields: Vec<&str> = if comma {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        if width == 0 {
            if fields.len() < 2 {
                return Err(malformed(source, line_no, "expected a label and at least one value"));
            }
            width = fields.len();
        } else if fields.len() != width {
            return Err(malformed(
                source,
                line_no,
                format!("expected {} fields, found {}", width, fields.len()),
            ));
        }
        let label: f64 = fields[0]
            .parse()
            .map_err(|_| malformed(source, line_no, format!("unparseable label '{}'", fields[0])))?;
        if !label.is_finite() {
            return Err(malformed(source, line_no, "label is not finite"));
        }
        let values = fields[1..]
            .iter()
            .map(|f| match f.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(malformed(source, line_no, format!("non-finite value '{f}'"))),
                Err(_) => Err(malformed(source, line_no, format!("unparseable value '{f}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(TimeSeries::labeled(values, label.trunc() as i64));
    }
    if out.is_empty() {
        return Err(Error::EmptyFile(source.to_string()));
    }
    Ok(out)
}

pub fn parse_ucr(path: impl AsRef<Path>) -> Result<Vec<TimeSeries>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ucr_str(&text, &path.display().to_string())
}

/// Loads a pre-split pair of UCR files as one dataset.
pub fn load_ucr_pair(name: &str, train: impl AsRef<Path>, test: impl AsRef<Path>) -> Result<Dataset> {
    Dataset::new(name, parse_ucr(train)?, parse_ucr(test)?)
}

/// Built-in synthetic families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    /// Two classes of noisy sinusoids that differ in frequency. Each series
    /// gets a random phase and an amplitude in `[0.8, 1.2]`.
    Sinusoid {
        /// Cycles per series for class 0.
        cycles_a: f64,
        /// Cycles per series for class 1.
        cycles_b: f64,
        /// Standard deviation of the additive Gaussian noise.
        noise: f64,
    },
    /// Cylinder / bell / funnel patterns (classes 0, 1, 2).
    Cbf,
}

impl Generator {
    pub const SIN2: Generator = Generator::Sinusoid {
        cycles_a: 2.0,
        cycles_b: 4.0,
        noise: 0.1,
    };

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "sin2" | "sinusoid" => Ok(Self::SIN2),
            "cbf" => Ok(Generator::Cbf),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::Sinusoid { .. } => "sin2",
            Generator::Cbf => "cbf",
        }
    }

    pub fn num_classes(&self) -> usize {
        match self {
            Generator::Sinusoid { .. } => 2,
            Generator::Cbf => 3,
        }
    }

    fn sample(&self, label: usize, length: usize, rng: &mut rng::Rng) -> Vec<f64> {
        let n = length as f64;
        match *self {
            Generator::Sinusoid {
                cycles_a,
                cycles_b,
                noise,
            } => {
                let cycles = if label == 0 { cycles_a } else { cycles_b };
                let phase = rng.random_range(0.0..2.0 * PI);
                let amp = rng.random_range(0.8..1.2);
                (0..length)
                    .map(|t| {
                        let eps: f64 = StandardNormal.sample(rng);
                        amp * (2.0 * PI * cycles * t as f64 / n + phase).sin() + noise * eps
                    })
                    .collect()
            }
            Generator::Cbf => {
                // Classic CBF windows scaled from the 128-point definition:
                // onset a ~ U[n/8, n/4], width ~ U[n/4, 3n/4].
                let a = rng.random_range(n / 8.0..n / 4.0);
                let b = a + rng.random_range(n / 4.0..3.0 * n / 4.0);
                let eta: f64 = StandardNormal.sample(rng);
                (0..length)
                    .map(|t| {
                        let t = t as f64;
                        let eps: f64 = StandardNormal.sample(rng);
                        let inside = t >= a && t <= b;
                        let shape = if !inside {
                            0.0
                        } else {
                            match label {
                                0 => 1.0,
                                1 => (t - a) / (b - a),
                                _ => (b - t) / (b - a),
                            }
                        };
                        (6.0 + eta) * shape + eps
                    })
                    .collect()
            }
        }
    }
}

/// `count` labeled series from `generator`, all placed in the training
/// pool. Labels cycle through the classes, so they are balanced.
pub fn gen_synthetic(generator: &Generator, count: usize, length: usize, seed: u64) -> Result<Dataset> {
    gen_synthetic_split(generator, count, 0, length, seed)
}

/// Generates `train + test` series in one seeded stream and splits them.
pub fn gen_synthetic_split(
    generator: &Generator,
    train: usize,
    test: usize,
    length: usize,
    seed: u64,
) -> Result<Dataset> {
    let count = train + test;
    if count < 2 {
        return Err(Error::InvalidGenerator(format!(
            "count must be at least 2, got {count}"
        )));
    }
    if length < 8 {
        return Err(Error::InvalidGenerator(format!(
            "length must be at least 8, got {length}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let k = generator.num_classes();
    let mut all: Vec<TimeSeries> = (0..count)
        .map(|i| {
            let label = i % k;
            TimeSeries::labeled(generator.sample(label, length, &mut rng), label as i64)
        })
        .collect();
    let test_pool = all.split_off(train);
    Dataset::new(generator.name(), all, test_pool)
}

/// Concatenates datasets of equal series length. Labels are renumbered
/// per source so that classes of different parts never collide: the
/// distinct labels of part `p` (sorted) map to consecutive ids starting
/// after those of parts `0..p`.
pub fn merge_datasets(parts: &[Dataset]) -> Result<Dataset> {
    let Some(first) = parts.first() else {
        return Err(Error::InvalidGenerator("nothing to merge".into()));
    };
    let len = first.series_length;
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut offset = 0i64;
    for part in parts {
        if part.series_length != len {
            return Err(Error::LengthMismatch {
                expected: len,
                found: part.series_length,
            });
        }
        let mut labels = BTreeMap::new();
        for ts in part.train.iter().chain(&part.test) {
            if let Some(l) = ts.label {
                labels.insert(l, 0i64);
            }
        }
        for (k, v) in labels.values_mut().enumerate() {
            *v = offset + k as i64;
        }
        let relabel = |ts: &TimeSeries| TimeSeries {
            values: ts.values.clone(),
            label: ts.label.map(|l| labels[&l]),
        };
        train.extend(part.train.iter().map(relabel));
        test.extend(part.test.iter().map(relabel));
        offset += labels.len() as i64;
    }
    let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
    Dataset::new(name, train, test)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comma_rows() {
        let s = parse_ucr_str("2,0.1,0.2,0.3\n", "t").unwrap();
        assert_eq!(s, vec![TimeSeries::labeled(vec![0.1, 0.2, 0.3], 2)]);
    }

    #[test]
    fn parses_whitespace_rows_and_real_labels() {
        let s = parse_ucr_str("1 0.5 0.5\n\n  2.0\t-1e-3   4\n", "t").unwrap();
        assert_eq!(s[0], TimeSeries::labeled(vec![0.5, 0.5], 1));
        assert_eq!(s[1], TimeSeries::labeled(vec![-1e-3, 4.0], 2));
    }

    #[test]
    fn ragged_rows_rejected_with_line_number() {
        let err = parse_ucr_str("1,1,2,3\n\n1,1,2,3,4\n", "t").unwrap_err();
        assert!(matches!(err, Error::MalformedLine { line: 3, .. }), "{err}");
    }

    #[test]
    fn bad_numbers_and_empty_files() {
        assert!(matches!(
            parse_ucr_str("1,abc\n", "t"),
            Err(Error::MalformedLine { line: 1, .. })
        ));
        assert!(matches!(
            parse_ucr_str("1,NaN\n", "t"),
            Err(Error::MalformedLine { .. })
        ));
        assert!(matches!(parse_ucr_str("\n  \n", "t"), Err(Error::EmptyFile(_))));
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = gen_synthetic(&Generator::SIN2, 4, 32, 7).unwrap();
        let b = gen_synthetic(&Generator::SIN2, 4, 32, 7).unwrap();
        let bits = |d: &Dataset| -> Vec<u64> {
            d.train
                .iter()
                .flat_map(|s| s.values.iter().map(|v| v.to_bits()))
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&gen_synthetic(&Generator::SIN2, 4, 32, 8).unwrap()));
    }

    #[test]
    fn cbf_is_balanced() {
        let d = gen_synthetic(&Generator::Cbf, 30, 128, 1).unwrap();
        let mut counts = [0; 3];
        for ts in &d.train {
            counts[ts.label.unwrap() as usize] += 1;
        }
        assert_eq!(counts, [10, 10, 10]);
    }

    #[test]
    fn generator_preconditions() {
        assert!(gen_synthetic(&Generator::SIN2, 4, 4, 0).is_err());
        assert!(gen_synthetic(&Generator::Cbf, 1, 64, 0).is_err());
        assert!(matches!(Generator::from_name("dtw"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn split_sizes() {
        let d = gen_synthetic_split(&Generator::SIN2, 20, 6, 16, 3).unwrap();
        assert_eq!((d.train.len(), d.test.len(), d.series_length), (20, 6, 16));
    }

    #[test]
    fn merge_concatenates_and_renumbers() {
        let a = gen_synthetic(&Generator::SIN2, 10, 64, 1).unwrap();
        let b = gen_synthetic(&Generator::Cbf, 20, 64, 2).unwrap();
        let m = merge_datasets(&[a.clone(), b]).unwrap();
        assert_eq!(m.train.len(), 30);
        let labels: std::collections::BTreeSet<_> = m.train.iter().map(|s| s.label.unwrap()).collect();
        assert_eq!(labels.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);

        let single = merge_datasets(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single.train, a.train);
    }

    #[test]
    fn merge_rejects_length_mismatch() {
        let a = gen_synthetic(&Generator::SIN2, 4, 64, 1).unwrap();
        let b = gen_synthetic(&Generator::SIN2, 4, 128, 1).unwrap();
        assert!(matches!(merge_datasets(&[a, b]), Err(Error::LengthMismatch { .. })));
    }
}
