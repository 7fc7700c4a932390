//! Scans for the obstruction sets `O_c = {guard <= dist < 1, G < c dist^{1/c}}`
//! and the diagnostics built on them.

pub mod counterexample;
mod fit;
mod growth;
mod scan;
mod sources;

pub use fit::{
    aitken, fit_exponent, fit_points, obstruction_scan, sample_band, Band, ExponentFit, FitSample, ObstructionReport,
    ObstructionScale, ScaleResult,
};
pub use growth::{
    hyperbolic_bound, prop2_boundary_check, slow_growth_check, GrowthEntry, GrowthStep, HyperbolicBound, Prop2Report,
    SlowGrowthReport,
};
pub use scan::{
    find_c_star, ln_rhs, min_guard, monotone_oc_check, scan_oc, verdict_stability, CStarReport, FlaggedCell,
    LSScanReport, LevelSummary, StabilityReport, Verdict, DEFAULT_LADDER,
};
pub use sources::{FieldGreen, GreenSource, JuliaGreen, ScaledGreen};
