//! Text and image artifacts.
//!
//! Matrix CSV:
//!
//! ```text
//! # kind=GASF size=3 rescale=unit
//! 1.0000000000000000e0,5.0000000000000000e-1,...
//! ```
//!
//! Every real is written with 17 significant digits, which is enough for
//! any finite double to parse back to the identical bit pattern. The model
//! format uses the same number syntax:
//!
//! ```text
//! TSIMG-DA 1
//! d h
//! <h lines of d encoder weights>
//! <1 line of h encoder biases>
//! <d lines of h decoder weights>
//! <1 line of d decoder biases>
//! ```

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use image::{GrayImage, ImageFormat, Luma, Rgb, RgbImage};
use ndarray::{Array1, Array2};

use crate::classify::CompoundImage;
use crate::error::{Error, Result};
use crate::gaf::{FieldKind, FieldMatrix};
use crate::impute::DaModel;
use crate::series::{RescaleMode, TimeSeries};

pub const MODEL_MAGIC: &str = "TSIMG-DA 1";

/// Formats `v` with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn join_reals<'a>(values: impl IntoIterator<Item = &'a f64>, sep: &str) -> String {
    let mut line = String::new();
    for (k, v) in values.into_iter().enumerate() {
        if k > 0 {
            line.push_str(sep);
        }
        line.push_str(&fmt_real(*v));
    }
    line
}

pub fn matrix_to_csv(m: &FieldMatrix) -> String {
    let mode = m.rescale_mode.map_or("none", RescaleMode::name);
    let mut out = format!("# kind={} size={} rescale={}\n", m.kind.name(), m.size(), mode);
    for row in m.cells.rows() {
        out.push_str(&join_reals(row.iter(), ","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(m: &FieldMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &matrix_to_csv(m))
}

/// Parses matrix CSV text and validates the cells against the header's
/// kind. `source` names the input in error messages.
pub fn matrix_from_csv(text: &str, source: &str) -> Result<FieldMatrix> {
    let mismatch = |reason: String| Error::HeaderMismatch {
        path: source.to_string(),
        reason,
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| mismatch("missing header".into()))?;
    let header = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| mismatch(format!("bad header line '{header}'")))?;
    let (mut kind, mut size, mut mode) = (None, None, None);
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| mismatch(format!("bad header field '{field}'")))?;
        match key {
            "kind" => kind = Some(value.parse::<FieldKind>().map_err(mismatch)?),
            "size" => size = Some(value.parse::<usize>().map_err(|e| mismatch(e.to_string()))?),
            "rescale" => {
                mode = match value {
                    "none" => None,
                    v => Some(v.parse::<RescaleMode>().map_err(mismatch)?),
                }
            }
            other => return Err(mismatch(format!("unknown header key '{other}'"))),
        }
    }
    let kind = kind.ok_or_else(|| mismatch("header lacks kind".into()))?;
    let size = size.ok_or_else(|| mismatch("header lacks size".into()))?;

    let mut cells = Vec::with_capacity(size * size);
    let mut rows = 0;
    for (idx, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::MalformedLine {
                    path: source.to_string(),
                    line: idx + 2,
                    reason: format!("unparseable value '{}'", f.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != size {
            return Err(mismatch(format!(
                "row {} has {} cells, header says {size}",
                idx + 1,
                row.len()
            )));
        }
        cells.extend(row);
        rows += 1;
    }
    if rows != size {
        return Err(mismatch(format!("{rows} rows, header says {size}")));
    }
    let m = FieldMatrix {
        kind,
        cells: Array2::from_shape_vec((size, size), cells).expect("validated shape"),
        rescale_mode: mode,
    };
    m.check_invariants(1e-12).map_err(mismatch)?;
    Ok(m)
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<FieldMatrix> {
    let path = path.as_ref();
    matrix_from_csv(&read_text(path)?, &path.display().to_string())
}

/// Affine map of `[lo, hi]` onto `[0, 255]` with half-up rounding.
pub fn pixel(v: f64, (lo, hi): (f64, f64)) -> u8 {
    let scaled = (v - lo) / (hi - lo) * 255.0;
    (scaled + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn field_to_gray(m: &FieldMatrix) -> GrayImage {
    let n = m.size() as u32;
    let range = m.kind.range();
    GrayImage::from_fn(n, n, |x, y| Luma([pixel(m.cells[[y as usize, x as usize]], range)]))
}

/// R = GASF, G = GADF, B = MTF.
pub fn compound_to_rgb(img: &CompoundImage) -> RgbImage {
    let n = img.size() as u32;
    RgbImage::from_fn(n, n, |x, y| {
        let at = |c: usize| {
            let ch = &img.channels[c];
            pixel(ch.cells[[y as usize, x as usize]], ch.kind.range())
        };
        Rgb([at(0), at(1), at(2)])
    })
}

fn save_png<P, C>(image: &image::ImageBuffer<P, C>, path: &Path) -> Result<()>
where
    P: image::PixelWithColorType,
    [P::Subpixel]: image::EncodableLayout,
    C: std::ops::Deref<Target = [P::Subpixel]>,
{
    image.save_with_format(path, ImageFormat::Png).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Image {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    })
}

/// 8-bit grayscale PNG, one pixel per cell, matrix row `i` = image row `i`.
pub fn render_png(m: &FieldMatrix, path: impl AsRef<Path>) -> Result<()> {
    save_png(&field_to_gray(m), path.as_ref())
}

pub fn render_compound_png(img: &CompoundImage, path: impl AsRef<Path>) -> Result<()> {
    save_png(&compound_to_rgb(img), path.as_ref())
}

pub fn ucr_to_string(series: &[TimeSeries]) -> Result<String> {
    let mut out = String::new();
    for (index, ts) in series.iter().enumerate() {
        let label = ts.label.ok_or(Error::Unlabeled { index })?;
        let _ = write!(out, "{label}");
        for v in &ts.values {
            out.push(',');
            out.push_str(&fmt_real(*v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes labeled series as comma-delimited UCR rows.
pub fn write_ucr(series: &[TimeSeries], path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &ucr_to_string(series)?)
}

pub fn model_to_string(m: &DaModel) -> String {
    let mut out = format!("{MODEL_MAGIC}\n{} {}\n", m.input_dim(), m.hidden_dim());
    let mut push = |line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    for row in m.enc_w.rows() {
        push(join_reals(row.iter(), " "));
    }
    push(join_reals(m.enc_b.iter(), " "));
    for row in m.dec_w.rows() {
        push(join_reals(row.iter(), " "));
    }
    push(join_reals(m.dec_b.iter(), " "));
    out
}

pub fn save_model(m: &DaModel, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &model_to_string(m))
}

pub fn model_from_string(text: &str, source: &str) -> Result<DaModel> {
    let mut lines = text.lines().enumerate();
    if lines.next().map(|(_, l)| l.trim()) != Some(MODEL_MAGIC) {
        return Err(Error::BadMagic(source.to_string()));
    }
    let dims: Vec<usize> = match lines.next() {
        Some((_, l)) => l.split_whitespace().filter_map(|t| t.parse().ok()).collect(),
        None => Vec::new(),
    };
    let [d, h] = dims[..] else {
        return Err(Error::DimMismatch {
            expected: 2,
            found: dims.len(),
        });
    };
    let mut read_row = |width: usize| -> Result<Vec<f64>> {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::DimMismatch {
                expected: width,
                found: 0,
            });
        };
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::MalformedLine {
                    path: source.to_string(),
                    line: idx + 1,
                    reason: format!("unparseable value '{t}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != width {
            return Err(Error::DimMismatch {
                expected: width,
                found: row.len(),
            });
        }
        Ok(row)
    };
    let mut block = |rows: usize, cols: usize| -> Result<Array2<f64>> {
        let mut cells = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            cells.extend(read_row(cols)?);
        }
        Ok(Array2::from_shape_vec((rows, cols), cells).expect("validated shape"))
    };
    let enc_w = block(h, d)?;
    let enc_b = Array1::from(block(1, h)?.into_raw_vec_and_offset().0);
    let dec_w = block(d, h)?;
    let dec_b = Array1::from(block(1, d)?.into_raw_vec_and_offset().0);
    Ok(DaModel {
        enc_w,
        enc_b,
        dec_w,
        dec_b,
    })
}

pub fn load_model(path: impl AsRef<Path>) -> Result<DaModel> {
    let path = path.as_ref();
    model_from_string(&read_text(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaf::gasf;
    use crate::series::rescale;
    use ndarray::array;

    fn sample_gasf(n: usize) -> FieldMatrix {
        let ts = TimeSeries::new((0..n).map(|i| (i as f64 * 0.37).sin() + 0.01 * i as f64).collect());
        gasf(&rescale(&ts, RescaleMode::Unit).unwrap()).unwrap()
    }

    fn bits(m: &Array2<f64>) -> Vec<u64> {
        m.iter().map(|v| v.to_bits()).collect()
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let m = sample_gasf(32);
        let back = matrix_from_csv(&matrix_to_csv(&m), "mem").unwrap();
        assert_eq!(back.kind, FieldKind::Gasf);
        assert_eq!(back.rescale_mode, Some(RescaleMode::Unit));
        assert_eq!(bits(&back.cells), bits(&m.cells));
    }

    #[test]
    fn csv_rejects_asymmetric_gasf() {
        let text = "# kind=GASF size=2 rescale=unit\n1,0.5\n0.25,1\n";
        assert!(matches!(
            matrix_from_csv(text, "mem"),
            Err(Error::HeaderMismatch { .. })
        ));
        let text = "# kind=MTF size=2 rescale=none\n1,0.5\n0.25\n";
        assert!(matches!(
            matrix_from_csv(text, "mem"),
            Err(Error::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn csv_missing_file_is_io_error() {
        let err = read_matrix_csv("/nonexistent/dir/m.csv").unwrap_err();
        assert!(err.is_io());
    }

    #[test]
    fn pixel_golden_values() {
        assert_eq!(pixel(-1.0, (-1.0, 1.0)), 0);
        assert_eq!(pixel(1.0, (-1.0, 1.0)), 255);
        assert_eq!(pixel(0.0, (-1.0, 1.0)), 128);
        assert_eq!(pixel(0.5, (0.0, 1.0)), 128);
        assert_eq!(pixel(0.0, (0.0, 1.0)), 0);
    }

    #[test]
    fn gray_image_keeps_matrix_layout() {
        let m = FieldMatrix {
            kind: FieldKind::Gadf,
            cells: array![[0.0, -1.0], [1.0, 0.0]],
            rescale_mode: Some(RescaleMode::Unit),
        };
        let img = field_to_gray(&m);
        assert_eq!(img.dimensions(), (2, 2));
        // (x, y) = (column, row)
        assert_eq!(img.get_pixel(1, 0).0, [0]);
        assert_eq!(img.get_pixel(0, 1).0, [255]);
    }

    #[test]
    fn png_written_and_decodable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.png");
        let m = sample_gasf(8);
        render_png(&m, &path).unwrap();
        let back = image::open(&path).unwrap().to_luma8();
        assert_eq!(back, field_to_gray(&m));
    }

    #[test]
    fn ucr_round_trip() {
        let series = vec![
            TimeSeries::labeled(vec![0.1, -2.5e-7, 3.0], 1),
            TimeSeries::labeled(vec![1.0 / 3.0, 7.0, f64::MIN_POSITIVE], -4),
        ];
        let back = crate::ingest::parse_ucr_str(&ucr_to_string(&series).unwrap(), "mem").unwrap();
        assert_eq!(back, series);
        let unlabeled = [TimeSeries::new(vec![1.0, 2.0])];
        assert!(matches!(ucr_to_string(&unlabeled), Err(Error::Unlabeled { index: 0 })));
    }

    #[test]
    fn model_round_trip_and_errors() {
        let m = DaModel::init(16, 4, 7).unwrap();
        let text = model_to_string(&m);
        let back = model_from_string(&text, "mem").unwrap();
        assert_eq!(bits(&back.enc_w), bits(&m.enc_w));
        assert_eq!(bits(&back.dec_w), bits(&m.dec_w));
        assert_eq!(back, m);

        let bad = text.replacen(MODEL_MAGIC, "TSIMG-DA 2", 1);
        assert!(matches!(model_from_string(&bad, "mem"), Err(Error::BadMagic(_))));

        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            model_from_string(&truncated, "mem"),
            Err(Error::DimMismatch { .. })
        ));
    }
}
