use ndarray::Array2;

use crate::error::{Error, Result};
use crate::gaf::{encode_gaf, FieldKind, FieldMatrix};
use crate::mtf::encode_mtf;
use crate::series::{PaaConfig, RescaleMode, TimeSeries};

/// Three aligned `S x S` channels in fixed order: GASF, GADF, MTF.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundImage {
    pub channels: [FieldMatrix; 3],
    /// Rows/columns replicated onto the MTF channel to reach `S x S`.
    pub mtf_padding: usize,
}

impl CompoundImage {
    pub fn new(gasf: FieldMatrix, gadf: FieldMatrix, mtf: FieldMatrix, mtf_padding: usize) -> Result<Self> {
        let expected = [FieldKind::Gasf, FieldKind::Gadf, FieldKind::Mtf];
        let size = gasf.size();
        for (ch, kind) in [&gasf, &gadf, &mtf].into_iter().zip(expected) {
            if ch.kind != kind {
                return Err(Error::KindMismatch {
                    expected: kind.name(),
                    found: ch.kind.name(),
                });
            }
            if ch.cells.dim() != (size, size) {
                return Err(Error::SizeMismatch {
                    expected: size,
                    found: ch.size(),
                });
            }
        }
        Ok(Self {
            channels: [gasf, gadf, mtf],
            mtf_padding,
        })
    }

    pub fn size(&self) -> usize {
        self.channels[0].size()
    }

    /// Row-major, channel by channel. This layout is the classifier's
    /// feature order.
    pub fn flatten(&self) -> Vec<f64> {
        self.channels.iter().flat_map(|c| c.cells.iter().copied()).collect()
    }
}

/// Extends `field` to `size x size` by replicating its last row and column.
fn pad_replicate(field: FieldMatrix, size: usize) -> FieldMatrix {
    let n = field.size();
    if n >= size {
        return field;
    }
    let cells = Array2::from_shape_fn((size, size), |(i, j)| field.cells[[i.min(n - 1), j.min(n - 1)]]);
    FieldMatrix { cells, ..field }
}

/// GASF and GADF of the PAA-smoothed series plus the MTF blurred to the
/// same size. The blur width `ceil(n/S)` can leave the MTF narrower than
/// `S`; it is then padded by edge replication.
pub fn compound_image(series: &TimeSeries, size: usize, num_bins: usize, mode: RescaleMode) -> Result<CompoundImage> {
    let paa = PaaConfig::new(size);
    let gasf = encode_gaf(series, mode, paa, FieldKind::Gasf)?;
    let gadf = encode_gaf(series, mode, paa, FieldKind::Gadf)?;
    let mtf = encode_mtf(series, num_bins, size)?;
    let padding = size - mtf.size();
    let mtf = pad_replicate(mtf, size);
    CompoundImage::new(gasf, gadf, mtf, padding)
}
