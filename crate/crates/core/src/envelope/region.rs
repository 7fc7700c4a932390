use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{DistanceOracle, NearestIndex};
use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Cell masks for a compact `A` inside an open set `U`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionMask {
    pub grid: GridSpec,
    pub a_mask: Vec<bool>,
    pub u_mask: Vec<bool>,
}

impl RegionMask {
    pub fn new(grid: GridSpec, a_mask: Vec<bool>, u_mask: Vec<bool>) -> Result<Self> {
        if a_mask.len() != grid.len() || u_mask.len() != grid.len() {
            return Err(Error::Precondition("mask sizes do not match the grid".into()));
        }
        if a_mask.iter().zip(&u_mask).any(|(&a, &u)| a && !u) {
            return Err(Error::Precondition("A is not contained in U".into()));
        }
        if !a_mask.iter().any(|&a| a) {
            return Err(Error::Precondition("A is empty on the grid".into()));
        }
        if u_mask.iter().all(|&u| u) {
            return Err(Error::Precondition("U covers the whole grid; no outer boundary".into()));
        }
        Ok(RegionMask { grid, a_mask, u_mask })
    }

    /// Masks from membership predicates evaluated at cell centres.
    pub fn from_fn(
        grid: GridSpec,
        in_a: impl Fn(Complex64) -> bool + Sync,
        in_u: impl Fn(Complex64) -> bool + Sync,
    ) -> Result<Self> {
        let (a, u): (Vec<bool>, Vec<bool>) = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let z = grid.center_of(i);
                let a = in_a(z);
                (a, a || in_u(z))
            })
            .unzip();
        Self::new(grid, a, u)
    }

    pub fn a_cells(&self) -> usize {
        self.a_mask.iter().filter(|&&a| a).count()
    }

    pub fn u_cells(&self) -> usize {
        self.u_mask.iter().filter(|&&u| u).count()
    }

    /// True when some cell of `U` lies on the grid edge.
    pub fn touches_edge(&self) -> bool {
        (0..self.grid.len()).any(|i| {
            let (ix, iy) = self.grid.coords(i);
            self.u_mask[i] && self.grid.is_edge(ix, iy)
        })
    }
}

/// Distance to the cell centres of a mask; zero on the mask itself.
pub struct MaskDistance {
    grid: GridSpec,
    mask: Vec<bool>,
    index: NearestIndex,
}

impl MaskDistance {
    pub fn new(grid: GridSpec, mask: &[bool]) -> Self {
        // only cells with a neighbour outside the mask can be nearest
        let pts: Vec<Complex64> = (0..grid.len())
            .filter(|&i| mask[i] && on_rim(&grid, mask, i))
            .map(|i| grid.center_of(i))
            .collect();
        MaskDistance {
            grid,
            mask: mask.to_vec(),
            index: NearestIndex::build(pts, grid.spacing),
        }
    }
}

fn on_rim(grid: &GridSpec, mask: &[bool], i: usize) -> bool {
    let (ix, iy) = grid.coords(i);
    if grid.is_edge(ix, iy) {
        return true;
    }
    !(mask[i - 1] && mask[i + 1] && mask[i - grid.nx] && mask[i + grid.nx])
}

impl DistanceOracle for MaskDistance {
    fn dist(&self, z: Complex64) -> f64 {
        if let Some((ix, iy)) = self.grid.cell_of(z) {
            if self.mask[self.grid.index(ix, iy)] {
                return 0.0;
            }
        }
        self.index.nearest(z).map_or(f64::INFINITY, |(_, d)| d)
    }

    fn resolution(&self) -> f64 {
        self.grid.spacing
    }
}

/// Cells whose centre lies within `ell` of the compact: `{dist <= ell}`.
pub fn dilate<D: DistanceOracle + ?Sized>(oracle: &D, grid: &GridSpec, ell: f64) -> Vec<bool> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| oracle.dist(grid.center_of(i)) <= ell)
        .collect()
}

/// Dilation of a cell mask by `ell`, measured between cell centres.
pub fn dilate_mask(grid: &GridSpec, mask: &[bool], ell: f64) -> Vec<bool> {
    dilate(&MaskDistance::new(*grid, mask), grid, ell)
}

/// The dilation radius `(1 / c^2)^c` used with level `c` in the main proof.
pub fn epsilon_for_level(c: f64) -> f64 {
    (1.0 / (c * c)).powf(c)
}
