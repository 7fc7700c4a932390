use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};

/// Lower bound on the radius past which Green function renormalisation starts.
pub const DEFAULT_BIG_RADIUS: f64 = 1e6;
pub const DEFAULT_MAX_ITERATIONS: usize = 2000;
/// Radii are compared squared; this keeps the square in range.
const MAX_RADIUS: f64 = 1e150;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeParams {
    pub escape_radius: f64,
    pub max_iterations: usize,
    pub big_radius: f64,
}

impl EscapeParams {
    pub fn new(escape_radius: f64, max_iterations: usize, big_radius: f64) -> Result<Self> {
        let p = Self {
            escape_radius,
            max_iterations,
            big_radius,
        };
        p.validate()?;
        Ok(p)
    }

    /// Certified escape radius of `poly`, `N = 2000`, `R_big = max(R, 1e6)`.
    pub fn for_poly(poly: &Polynomial) -> Self {
        Self::with_iterations(poly, DEFAULT_MAX_ITERATIONS)
    }

    pub fn with_iterations(poly: &Polynomial, max_iterations: usize) -> Self {
        let r = poly.escape_radius();
        Self {
            escape_radius: r,
            max_iterations: max_iterations.max(1),
            big_radius: r.max(DEFAULT_BIG_RADIUS),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.escape_radius >= 1.0 && self.escape_radius <= MAX_RADIUS) {
            return Err(Error::Precondition(format!(
                "escape radius {} must lie in [1, 1e150]",
                self.escape_radius
            )));
        }
        if self.max_iterations < 1 {
            return Err(Error::Precondition("max_iterations must be >= 1".into()));
        }
        if !(self.big_radius >= self.escape_radius && self.big_radius <= MAX_RADIUS) {
            return Err(Error::Precondition(format!(
                "big radius {} must lie between escape radius {} and 1e150",
                self.big_radius, self.escape_radius
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub escaped: bool,
    /// Index of the first iterate beyond the escape radius, or `N`.
    pub steps: usize,
    pub last_value: Complex64,
}

/// Iterates until `|f^n(z)| > R` or `N` steps have been taken. An iterate
/// that leaves double range counts as escaped at that step.
pub fn iterate_orbit(poly: &Polynomial, z: Complex64, params: &EscapeParams) -> OrbitResult {
    let r2 = params.escape_radius * params.escape_radius;
    let mut w = z;
    let mut n = 0;
    loop {
        let m = w.norm_sqr();
        if !(m <= r2) {
            // covers overflow to infinity and NaN
            return OrbitResult {
                escaped: true,
                steps: n,
                last_value: w,
            };
        }
        if n == params.max_iterations {
            return OrbitResult {
                escaped: false,
                steps: n,
                last_value: w,
            };
        }
        w = poly.eval(w);
        n += 1;
    }
}

/// One-sided membership test: `false` is certified, `true` may be a false
/// positive for points whose escape takes longer than `N` steps.
pub fn in_filled_julia(poly: &Polynomial, z: Complex64, params: &EscapeParams) -> bool {
    !iterate_orbit(poly, z, params).escaped
}
