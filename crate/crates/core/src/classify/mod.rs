//! Compound-image classification harness and the 1NN baseline.

mod baseline;
mod compound;
mod linear;
mod select;

pub use baseline::{baseline_1nn, nearest_label};
pub use compound::{compound_image, CompoundImage};
pub use linear::{error_rate, fit_linear, LinearModel, SvmConfig, DEFAULT_EPOCHS};
pub use select::{
    best_grid_point, classify_dataset, compare_grid_points, compound_features, cv_select_c, evaluate, model_select,
    stratified_folds, ClassificationReport, CvResult, GridPoint, Selection, SelectionGrid,
};
