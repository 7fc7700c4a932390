//! Polynomial maps: evaluation, iteration, escape, roots and critical orbits.

mod hyperbolic;
mod orbit;
mod poly;
mod roots;

pub use hyperbolic::{
    hyperbolicity_certificate, CriticalOrbit, CriticalVerdict, HyperbolicityReport, MAX_PERIOD, TOL_CYCLE,
};
pub use orbit::{
    in_filled_julia, iterate_orbit, EscapeParams, OrbitResult, DEFAULT_BIG_RADIUS, DEFAULT_MAX_ITERATIONS,
};
pub use poly::Polynomial;
pub use roots::{critical_points, residual_tolerance, roots, roots_with, RootOptions};
