//! Cell-centred rectangular grids and scalar fields sampled on them.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `nx * ny` square cells of side `spacing`; cell `(ix, iy)` is centred at
/// `origin + (ix + 1/2) h + i (iy + 1/2) h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub y0: f64,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: Complex64, spacing: f64, nx: usize, ny: usize) -> Result<Self> {
        let g = Self {
            x0: origin.re,
            y0: origin.im,
            spacing,
            nx,
            ny,
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid covering `[x_lo, x_hi] x [y_lo, y_hi]` with cells of side `h`
    /// (the upper edges are rounded to a whole number of cells).
    pub fn covering(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, h: f64) -> Result<Self> {
        if !(x_hi > x_lo && y_hi > y_lo) {
            return Err(Error::Precondition("empty grid extent".into()));
        }
        let nx = ((x_hi - x_lo) / h - 1e-9).ceil().max(1.0) as usize;
        let ny = ((y_hi - y_lo) / h - 1e-9).ceil().max(1.0) as usize;
        Self::new(Complex64::new(x_lo, y_lo), h, nx, ny)
    }

    /// Square `[-half, half]^2` around `center`.
    pub fn square(center: Complex64, half: f64, h: f64) -> Result<Self> {
        Self::covering(
            center.re - half,
            center.re + half,
            center.im - half,
            center.im + half,
            h,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::Precondition(format!(
                "grid spacing {} must be > 0",
                self.spacing
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Precondition("grid must have at least one cell".into()));
        }
        if !(self.x0.is_finite() && self.y0.is_finite()) {
            return Err(Error::Precondition("grid origin must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn origin(&self) -> Complex64 {
        Complex64::new(self.x0, self.y0)
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn center(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.x0 + (ix as f64 + 0.5) * self.spacing,
            self.y0 + (iy as f64 + 0.5) * self.spacing,
        )
    }

    #[inline]
    pub fn center_of(&self, idx: usize) -> Complex64 {
        let (ix, iy) = self.coords(idx);
        self.center(ix, iy)
    }

    /// Cell containing `z`, if any.
    #[inline]
    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fx = ((z.re - self.x0) / self.spacing).floor();
        let fy = ((z.im - self.y0) / self.spacing).floor();
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            None
        } else {
            Some((fx as usize, fy as usize))
        }
    }

    pub fn x_hi(&self) -> f64 {
        self.x0 + self.nx as f64 * self.spacing
    }

    pub fn y_hi(&self) -> f64 {
        self.y0 + self.ny as f64 * self.spacing
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.cell_of(z).is_some()
    }

    pub fn is_edge(&self, ix: usize, iy: usize) -> bool {
        ix == 0 || iy == 0 || ix + 1 == self.nx || iy + 1 == self.ny
    }

    /// Same extent, half the spacing.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            x0: self.x0,
            y0: self.y0,
            spacing: self.spacing / 2.0,
            nx: self.nx * 2,
            ny: self.ny * 2,
        }
    }

    /// All cell centres in index order.
    pub fn centers(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(|i| self.center_of(i))
    }

    /// `"x0,y0,h,nx,ny"`, the command-line form.
    pub fn to_arg(&self) -> String {
        format!("{},{},{},{},{}", self.x0, self.y0, self.spacing, self.nx, self.ny)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("grid `{s}` is not `x0,y0,h,nx,ny`")));
        }
        let f = |v: &str| v.parse::<f64>().map_err(|e| Error::Parse(format!("grid `{s}`: {e}")));
        let n = |v: &str| v.parse::<usize>().map_err(|e| Error::Parse(format!("grid `{s}`: {e}")));
        GridSpec::new(
            Complex64::new(f(parts[0])?, f(parts[1])?),
            f(parts[2])?,
            n(parts[3])?,
            n(parts[4])?,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// Green function with pole at infinity; values `>= 0`.
    Absolute,
    /// Relative Green function; values in `[-1, 0]`.
    Relative,
}

/// Scalar samples of a Green function at the cell centres of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenField {
    pub grid: GridSpec,
    pub kind: FieldKind,
    pub values: Vec<f64>,
}

impl GreenField {
    pub fn new(grid: GridSpec, kind: FieldKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "field has {} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        let ok = match kind {
            FieldKind::Absolute => values.iter().all(|&v| v >= 0.0),
            FieldKind::Relative => values.iter().all(|&v| (-1.0..=0.0).contains(&v)),
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "field values out of range for {kind:?} kind"
            )));
        }
        Ok(Self { grid, kind, values })
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }

    /// Value of the cell containing `z`.
    pub fn sample(&self, z: Complex64) -> Option<f64> {
        self.grid.cell_of(z).map(|(ix, iy)| self.at(ix, iy))
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}
