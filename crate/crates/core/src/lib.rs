//! Time series as images.
//!
//! Encodes univariate series as Gramian Angular Summation/Difference Fields
//! and Markov Transition Fields, inverts unit-scaled GASFs back to series,
//! imputes missing values by denoising GASF images with a single-layer
//! autoencoder, and classifies compound GASF-GADF-MTF images with a linear
//! SVM under an `(S, Q, C)` grid search.
//!
//! ```
//! use tsimg::{gaf, series::{PaaConfig, RescaleMode, TimeSeries}, reconstruct};
//!
//! let ts = TimeSeries::new(vec![0.0, 2.0, 1.0, 4.0]);
//! let field = gaf::encode_gaf(&ts, RescaleMode::Unit, PaaConfig::new(4), gaf::FieldKind::Gasf)?;
//! let back = reconstruct::reconstruct_series(&field)?;
//! assert!((back.values[1] - 0.5).abs() < 1e-12);
//! # Ok::<(), tsimg::Error>(())
//! ```

pub mod classify;
pub mod error;
pub mod gaf;
pub mod impute;
pub mod ingest;
pub mod io;
pub mod mtf;
pub mod reconstruct;
pub mod rng;
pub mod series;

pub use error::{Error, Result};
