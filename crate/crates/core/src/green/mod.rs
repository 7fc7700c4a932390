//! Green function of a filled Julia set, pointwise and on grids.

mod field;
mod measure;
mod value;

pub use field::{check_invariance, green_field, green_gradient, InvarianceReport};
pub use measure::{laplacian_measure, moment_orders, weighted_moments, DiscreteMeasure, LaplacianMeasure, Moment};
pub use value::{green_estimate, green_value, GreenEstimate, DEFAULT_SERIES_TERMS};

pub use crate::grid::{FieldKind, GreenField, GridSpec};
