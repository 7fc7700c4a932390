//! Julia set samples by inverse iteration and the distance-to-K oracle.

mod cloud;
mod distance;
mod equidist;
mod index;

pub use cloud::{
    default_base_point, preimage_tree, pullback_deviation, BoundaryCloud, CloudMeta, CloudMode, MAX_TREE_POINTS,
    TOL_PULLBACK,
};
pub use distance::{dist_to_k, interior_density_check, CloudDistance, DensityReport, DistanceOracle};
pub use equidist::{
    cloud_moments, equidistribution_report, EquidistributionReport, MomentDeviation, DEFAULT_MAX_ORDER,
};
pub use index::NearestIndex;
