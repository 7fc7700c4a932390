use num_complex::Complex64;

use super::Polynomial;
use crate::error::{Error, Result};

/// Angle offset of the initial guesses. Any value that is not a rational
/// multiple of pi breaks the symmetry of real or symmetric coefficient sets.
const INITIAL_ROTATION: f64 = 0.4;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Relative residual tolerance, scaled by `max(1, max|a_k|) (1 + |r|)^d`.
    pub tol_root: f64,
    pub max_sweeps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            tol_root: 1e-12,
            max_sweeps: 500,
        }
    }
}

/// Residual bound for a candidate root under `opts`.
pub fn residual_tolerance(poly: &Polynomial, r: Complex64, opts: &RootOptions) -> f64 {
    opts.tol_root * poly.coefficient_scale() * (1.0 + r.norm()).powi(poly.degree() as i32)
}

/// All roots with multiplicity, by Aberth-Ehrlich simultaneous iteration.
pub fn roots(poly: &Polynomial) -> Result<Vec<Complex64>> {
    roots_with(poly, &RootOptions::default())
}

pub fn roots_with(poly: &Polynomial, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let d = poly.degree();
    let a = poly.coeffs();
    match d {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-a[0] / a[1]]),
        _ => {}
    }

    let lead = poly.leading();
    let center = -a[d - 1] / (lead * d as f64);
    // Roots of the recentred polynomial lie within 2 * max |b_k / b_d|^{1/(d-k)}.
    let shifted = poly.taylor_shift(center);
    let mut radius: f64 = 0.0;
    for (k, b) in shifted[..d].iter().enumerate() {
        let ratio = (b / lead).norm();
        if ratio > 0.0 {
            radius = radius.max(ratio.powf(1.0 / (d - k) as f64));
        }
    }
    if radius == 0.0 {
        // f = a_d (z - center)^d exactly
        return Ok(vec![center; d]);
    }

    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + INITIAL_ROTATION;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut frozen = vec![false; d];

    for sweep in 0..opts.max_sweeps {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            if frozen[i] {
                continue;
            }
            let (p, dp) = poly.eval_with_derivative(z[i]);
            if p.norm_sqr() == 0.0 {
                frozen[i] = true;
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    repulsion += (z[i] - zj).inv();
                }
            }
            let denom = dp - p * repulsion;
            let step = if denom.norm_sqr() == 0.0 || !denom.is_finite() {
                // stationary point of the Aberth correction: nudge off it
                Complex64::from_polar(1e-8 * (1.0 + z[i].norm()), sweep as f64 + 1.0)
            } else {
                p / denom
            };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
            if rel <= 4.0 * f64::EPSILON {
                frozen[i] = true;
            }
        }
        if frozen.iter().all(|&f| f) {
            break;
        }
        // Clusters (multiple roots) converge only linearly; accept them once
        // every residual is within tolerance and steps have become small.
        if sweep >= 4 && max_step < 1e-7 && all_within_tolerance(poly, &z, opts) {
            break;
        }
    }

    let residuals: Vec<f64> = z.iter().map(|&r| poly.eval(r).norm()).collect();
    if z.iter()
        .zip(&residuals)
        .all(|(&r, &res)| res <= residual_tolerance(poly, r, opts) && r.is_finite())
    {
        Ok(z)
    } else {
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        Err(Error::RootsNotConverged {
            sweeps: opts.max_sweeps,
            max_residual,
            residuals,
        })
    }
}

fn all_within_tolerance(poly: &Polynomial, z: &[Complex64], opts: &RootOptions) -> bool {
    z.iter()
        .all(|&r| poly.eval(r).norm() <= residual_tolerance(poly, r, opts))
}

/// Roots of the derivative.
pub fn critical_points(poly: &Polynomial) -> Result<Vec<Complex64>> {
    roots(&poly.derivative()?)
}
