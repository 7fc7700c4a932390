use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FieldKind, GreenField, GridSpec};

/// Nonnegative cell masses on a grid, normalised to total one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub grid: GridSpec,
    pub masses: Vec<f64>,
    pub total: f64,
}

/// Mixed moment `E[y^j conj(y)^k]` indexed by `(j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub j: u32,
    pub k: u32,
    pub value: Complex64,
}

/// All `(j, k)` with `1 <= j + k <= max_order`.
pub fn moment_orders(max_order: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for total in 1..=max_order {
        for j in 0..=total {
            out.push((j, total - j));
        }
    }
    out
}

/// Moments of a weighted point set.
pub fn weighted_moments<I>(points: I, max_order: u32) -> Vec<Moment>
where
    I: IntoIterator<Item = (Complex64, f64)>,
{
    let orders = moment_orders(max_order);
    let mut acc = vec![Complex64::new(0.0, 0.0); orders.len()];
    let mut total = 0.0;
    for (y, w) in points {
        if w == 0.0 {
            continue;
        }
        total += w;
        let yb = y.conj();
        for (slot, &(j, k)) in acc.iter_mut().zip(&orders) {
            *slot += y.powu(j) * yb.powu(k) * w;
        }
    }
    orders
        .into_iter()
        .zip(acc)
        .map(|((j, k), s)| Moment { j, k, value: s / total })
        .collect()
}

impl DiscreteMeasure {
    pub fn moments(&self, max_order: u32) -> Vec<Moment> {
        weighted_moments(
            self.masses
                .iter()
                .enumerate()
                .map(|(i, &m)| (self.grid.center_of(i), m)),
            max_order,
        )
    }

    /// Mass of the cells whose centres satisfy `pred`.
    pub fn mass_where(&self, pred: impl Fn(Complex64) -> bool) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .filter(|(i, _)| pred(self.grid.center_of(*i)))
            .map(|(_, &m)| m)
            .sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaplacianMeasure {
    pub measure: DiscreteMeasure,
    /// Total of the clamped masses before normalisation.
    pub raw_mass: f64,
    /// Total magnitude of the negative cell values that were clamped to zero.
    pub clamped_negative: f64,
}

/// `(1 / 2 pi)` times the five-point Laplacian of G, times the cell area.
///
/// Edge cells carry no mass. Negative values are discretisation noise; they
/// are clamped and their total reported. The unnormalised mass is the flux
/// of G through the grid boundary over `2 pi`, which must be within 5% of one
/// when the grid contains K well inside.
pub fn laplacian_measure(field: &GreenField) -> Result<LaplacianMeasure> {
    if field.kind != FieldKind::Absolute {
        return Err(Error::Precondition(
            "laplacian measure needs an absolute Green field".into(),
        ));
    }
    let g = &field.grid;
    if g.nx < 3 || g.ny < 3 {
        return Err(Error::Precondition("grid too small for a five-point stencil".into()));
    }
    let mut masses = vec![0.0; g.len()];
    let mut clamped_negative = 0.0;
    let inv = 1.0 / std::f64::consts::TAU;
    for iy in 1..g.ny - 1 {
        for ix in 1..g.nx - 1 {
            let c = field.at(ix, iy);
            let lap =
                field.at(ix + 1, iy) + field.at(ix - 1, iy) + field.at(ix, iy + 1) + field.at(ix, iy - 1) - 4.0 * c;
            let m = lap * inv;
            if m < 0.0 {
                clamped_negative -= m;
            } else {
                masses[g.index(ix, iy)] = m;
            }
        }
    }
    let raw_mass: f64 = masses.iter().sum();
    if !((raw_mass - 1.0).abs() <= 0.05) {
        return Err(Error::MassDeviation { mass: raw_mass });
    }
    for m in &mut masses {
        *m /= raw_mass;
    }
    let total = masses.iter().sum();
    Ok(LaplacianMeasure {
        measure: DiscreteMeasure {
            grid: *g,
            masses,
            total,
        },
        raw_mass,
        clamped_negative,
    })
}
