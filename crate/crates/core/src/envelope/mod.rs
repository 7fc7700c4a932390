//! Relative Green functions `G_{A,U}` by relaxation and by analytic discs,
//! and the level-set quantities built from them.

mod levels;
mod poletsky;
mod region;
mod relax;

pub use levels::{
    check_relation_level_sets, corona_and_delta, relation_from_field, sublevel_region, CoronaReport, LevelRegion,
    RelationReport,
};
pub use poletsky::{
    poletsky_estimate, DiscFamily, DiscSample, PoletskyContext, PoletskyEstimate, PoletskyOptions, QUADRATURE,
};
pub use region::{dilate, dilate_mask, epsilon_for_level, MaskDistance, RegionMask};
pub use relax::{
    relax_relative_green, relax_with, RelaxOptions, RelaxStats, Relaxation, DEFAULT_MAX_SWEEPS, DEFAULT_TOL,
};
