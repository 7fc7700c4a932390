//! Discrete relative Green function by projected red-black SOR.
//!
//! The solver works with `u = v + 1`, so `u = 0` on `A`, `u = 1` off `U`
//! and the obstacle is `u <= 1`. Each colour class is stored in its own
//! array with a one-cell frame of fixed `u = 1`, so a half-sweep reads only
//! the other array and rows update independently.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RegionMask;
use crate::error::{Error, Result};
use crate::grid::{FieldKind, GreenField};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_SWEEPS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    /// Over-relaxation factor; `None` picks `2 / (1 + sin(pi / N))` from the
    /// extent `N` of `U` in cells.
    pub omega: Option<f64>,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        RelaxOptions {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_MAX_SWEEPS,
            omega: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxStats {
    pub sweeps: usize,
    /// Largest update in the final sweep.
    pub residual: f64,
    pub omega: f64,
}

#[derive(Clone, Debug)]
pub struct Relaxation {
    pub field: GreenField,
    pub stats: RelaxStats,
}

/// Largest discrete subharmonic minorant: `v = -1` on `A`, `v = 0` off `U`
/// and `v = min(0, mean of the four neighbours)` on `U \ A`.
pub fn relax_relative_green(region: &RegionMask, tol: f64, max_sweeps: usize) -> Result<GreenField> {
    let opts = RelaxOptions {
        tol,
        max_sweeps,
        omega: None,
    };
    relax_with(region, &opts, None).map(|r| r.field)
}

/// Relaxation with explicit options and an optional starting field sampled
/// cell by cell (it must live on the region's grid).
pub fn relax_with(region: &RegionMask, opts: &RelaxOptions, init: Option<&GreenField>) -> Result<Relaxation> {
    if !(opts.tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance {} must be positive", opts.tol)));
    }
    if let Some(f) = init {
        if f.grid != region.grid {
            return Err(Error::Precondition("initial field lives on another grid".into()));
        }
    }
    let g = &region.grid;
    let omega = opts.omega.unwrap_or_else(|| default_omega(region));
    if !(omega > 0.0 && omega < 2.0) {
        return Err(Error::Precondition(format!("omega {omega} outside (0, 2)")));
    }
    let mut b = Board::new(region, init);
    let mut residual = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        residual = b.half_sweep(0, omega).max(b.half_sweep(1, omega));
        if residual < opts.tol {
            break;
        }
    }
    if !(residual < opts.tol) {
        return Err(Error::RelaxationNotConverged { sweeps, residual });
    }
    let values = (0..g.len())
        .map(|i| {
            let (ix, iy) = g.coords(i);
            (b.get(ix + 1, iy + 1) - 1.0).clamp(-1.0, 0.0)
        })
        .collect();
    Ok(Relaxation {
        field: GreenField {
            grid: *g,
            kind: FieldKind::Relative,
            values,
        },
        stats: RelaxStats {
            sweeps,
            residual,
            omega,
        },
    })
}

fn default_omega(region: &RegionMask) -> f64 {
    let g = &region.grid;
    let (mut x0, mut x1, mut y0, mut y1) = (usize::MAX, 0, usize::MAX, 0);
    for i in (0..g.len()).filter(|&i| region.u_mask[i]) {
        let (ix, iy) = g.coords(i);
        x0 = x0.min(ix);
        x1 = x1.max(ix);
        y0 = y0.min(iy);
        y1 = y1.max(iy);
    }
    let n = (x1 - x0).max(y1 - y0) as f64 + 2.0;
    2.0 / (1.0 + (std::f64::consts::PI / n).sin())
}

/// Padded board split by colour `(px + py) % 2`; cell `(px, py)` sits at
/// slot `py * w + px / 2` of its colour's arrays.
struct Board {
    w: usize,
    pw: usize,
    ph: usize,
    val: [Vec<f64>; 2],
    free: [Vec<bool>; 2],
}

impl Board {
    fn new(region: &RegionMask, init: Option<&GreenField>) -> Self {
        let g = &region.grid;
        let (pw, ph) = (g.nx + 2, g.ny + 2);
        let w = pw.div_ceil(2);
        let mut val = [vec![1.0; w * ph], vec![1.0; w * ph]];
        let mut free = [vec![false; w * ph], vec![false; w * ph]];
        for i in 0..g.len() {
            let (ix, iy) = g.coords(i);
            let (px, py) = (ix + 1, iy + 1);
            let (col, slot) = ((px + py) % 2, py * w + px / 2);
            if region.a_mask[i] {
                val[col][slot] = 0.0;
            } else if region.u_mask[i] {
                free[col][slot] = true;
                val[col][slot] = init.map_or(1.0, |f| (f.values[i] + 1.0).clamp(0.0, 1.0));
            }
        }
        Board { w, pw, ph, val, free }
    }

    fn get(&self, px: usize, py: usize) -> f64 {
        self.val[(px + py) % 2][py * self.w + px / 2]
    }

    /// Updates every free cell of colour `col`; returns the largest change.
    #[allow(clippy::manual_div_ceil)]
    fn half_sweep(&mut self, col: usize, omega: f64) -> f64 {
        let (w, pw, ph) = (self.w, self.pw, self.ph);
        let [v0, v1] = &mut self.val;
        let (mine, other) = if col == 0 { (v0, &*v1) } else { (v1, &*v0) };
        let free = &self.free[col];
        mine.par_chunks_mut(w)
            .enumerate()
            .filter(|(py, _)| *py > 0 && *py + 1 < ph)
            .map(|(py, row)| {
                let p = (col + py) % 2;
                let (up, here, down) = ((py - 1) * w, py * w, (py + 1) * w);
                let mut change = 0.0f64;
                for (k, u) in row.iter_mut().enumerate() {
                    let px = 2 * k + p;
                    if px >= pw || !free[here + k] {
                        continue;
                    }
                    let mean = 0.25
                        * (other[here + (px - 1) / 2] + other[here + (px + 1) / 2] + other[up + k] + other[down + k]);
                    let next = (*u + omega * (mean - *u)).min(1.0);
                    change = change.max((next - *u).abs());
                    *u = next;
                }
                change
            })
            .reduce(|| 0.0, f64::max)
    }
}
