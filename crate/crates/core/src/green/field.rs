use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::value::green_value;
use crate::dyncore::{in_filled_julia, EscapeParams, Polynomial};
use crate::error::{Error, Result};
use crate::grid::{FieldKind, GreenField, GridSpec};

/// `green_value` at every cell centre, in cell order.
pub fn green_field(poly: &Polynomial, grid: &GridSpec, params: &EscapeParams, series_terms: usize) -> GreenField {
    let values: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| green_value(poly, grid.center_of(i), params, series_terms))
        .collect();
    GreenField {
        grid: *grid,
        kind: FieldKind::Absolute,
        values,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub max_deviation: f64,
    pub worst_point: Option<Complex64>,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

/// Max of `|G(f(z)) - d G(z)|` over `points`.
pub fn check_invariance(
    poly: &Polynomial,
    points: &[Complex64],
    params: &EscapeParams,
    series_terms: usize,
    tol: f64,
) -> InvarianceReport {
    let d = poly.degree() as f64;
    let deviations: Vec<f64> = points
        .par_iter()
        .map(|&z| {
            let lhs = green_value(poly, poly.eval(z), params, series_terms);
            let rhs = d * green_value(poly, z, params, series_terms);
            (lhs - rhs).abs()
        })
        .collect();
    let (worst, max_deviation) =
        deviations.iter().enumerate().fold(
            (None, 0.0),
            |(wi, wm), (i, &v)| if v > wm { (Some(i), v) } else { (wi, wm) },
        );
    InvarianceReport {
        max_deviation,
        worst_point: worst.map(|i| points[i]),
        tolerance: tol,
        points: points.len(),
        pass: max_deviation <= tol,
    }
}

/// Central-difference gradient `(dG/dx, dG/dy)`. Every stencil point must lie
/// outside K, where G is harmonic.
pub fn green_gradient(
    poly: &Polynomial,
    z: Complex64,
    step: f64,
    params: &EscapeParams,
    series_terms: usize,
) -> Result<[f64; 2]> {
    if !(step > 0.0) {
        return Err(Error::Precondition(format!("gradient step {step} must be > 0")));
    }
    let offsets = [
        Complex64::new(step, 0.0),
        Complex64::new(-step, 0.0),
        Complex64::new(0.0, step),
        Complex64::new(0.0, -step),
    ];
    let mut g = [0.0; 4];
    for (slot, off) in g.iter_mut().zip(offsets) {
        let p = z + off;
        if in_filled_julia(poly, p, params) {
            return Err(Error::StencilInside(p));
        }
        *slot = green_value(poly, p, params, series_terms);
    }
    Ok([(g[0] - g[1]) / (2.0 * step), (g[2] - g[3]) / (2.0 * step)])
}
