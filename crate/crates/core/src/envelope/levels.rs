//! Sublevel sets `U_a = {G < a}` of a Julia Green function, the identity
//! `G = a (G_{K, U_a} + 1)` on them, and the corona `U_a \ U_{a/d}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::region::dilate;
use super::relax::{relax_with, RelaxOptions, RelaxStats};
use super::RegionMask;
use crate::boundary::DistanceOracle;
use crate::dyncore::{EscapeParams, Polynomial};
use crate::error::{Error, Result};
use crate::green::{green_field, green_value, DEFAULT_SERIES_TERMS};
use crate::grid::{FieldKind, GreenField, GridSpec};

fn check_absolute(field: &GreenField, a: f64) -> Result<()> {
    if field.kind != FieldKind::Absolute {
        return Err(Error::Precondition("level sets need an absolute Green field".into()));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Precondition(format!("level {a} must be positive")));
    }
    Ok(())
}

/// `K` and `U_a` as cell masks of an absolute field; `U_a` must stay off
/// the grid edge.
pub fn sublevel_region(field: &GreenField, a: f64) -> Result<RegionMask> {
    check_absolute(field, a)?;
    let k: Vec<bool> = field.values.iter().map(|&g| g == 0.0).collect();
    let u: Vec<bool> = field.values.iter().map(|&g| g < a).collect();
    let region = RegionMask::new(field.grid, k, u)?;
    if region.touches_edge() {
        return Err(Error::Precondition(format!(
            "U_a for a = {a} reaches the grid edge; enlarge the grid"
        )));
    }
    Ok(region)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationReport {
    pub a: f64,
    pub spacing: f64,
    pub a_cells: usize,
    pub u_cells: usize,
    /// `max |G - a (G_{K,U_a} + 1)|` over the cells of `U_a`.
    pub max_deviation: f64,
    pub worst_point: Complex64,
    /// `max_deviation / h`.
    pub constant: f64,
    pub tol: f64,
    pub pass: bool,
    pub relax: RelaxStats,
}

/// Compares `G` with `a (G_{K,U_a} + 1)` on `U_a`, the relative field coming
/// from relaxation on the same grid. Returns the relative field as well.
pub fn relation_from_field(
    field: &GreenField,
    a: f64,
    tol: f64,
    opts: &RelaxOptions,
) -> Result<(RelationReport, GreenField)> {
    let region = sublevel_region(field, a)?;
    let rel = relax_with(&region, opts, None)?;
    let (max_deviation, worst) = (0..field.grid.len())
        .filter(|&i| region.u_mask[i])
        .map(|i| ((field.values[i] - a * (rel.field.values[i] + 1.0)).abs(), i))
        .fold((0.0, usize::MAX), |acc, x| if x.0 > acc.0 { x } else { acc });
    let worst_point = if worst == usize::MAX {
        Complex64::new(f64::NAN, f64::NAN)
    } else {
        field.grid.center_of(worst)
    };
    let report = RelationReport {
        a,
        spacing: field.grid.spacing,
        a_cells: region.a_cells(),
        u_cells: region.u_cells(),
        max_deviation,
        worst_point,
        constant: max_deviation / field.grid.spacing,
        tol,
        pass: max_deviation <= tol,
        relax: rel.stats,
    };
    Ok((report, rel.field))
}

/// Green field of `poly` on `grid`, then [`relation_from_field`].
pub fn check_relation_level_sets(
    poly: &Polynomial,
    params: &EscapeParams,
    a: f64,
    grid: &GridSpec,
    tol: f64,
    opts: &RelaxOptions,
) -> Result<(RelationReport, GreenField)> {
    let field = green_field(poly, grid, params, DEFAULT_SERIES_TERMS);
    relation_from_field(&field, a, tol, opts)
}

/// `U_a`, its pullback and the corona on one grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelRegion {
    pub a: f64,
    pub grid: GridSpec,
    pub u_a: Vec<bool>,
    /// `{G < a / d}`.
    pub u_a_over_d: Vec<bool>,
    /// `{G(f z) < a}`, which equals `U_{a/d}` by invariance.
    pub pullback: Vec<bool>,
    /// Cells where the pullback and `U_{a/d}` disagree.
    pub pullback_mismatch: usize,
    /// `U_a \ U_{a/d}`.
    pub corona: Vec<bool>,
}

impl LevelRegion {
    pub fn new(poly: &Polynomial, params: &EscapeParams, field: &GreenField, a: f64) -> Result<Self> {
        check_absolute(field, a)?;
        let d = poly.degree() as f64;
        let u_a: Vec<bool> = field.values.iter().map(|&g| g < a).collect();
        let u_a_over_d: Vec<bool> = field.values.iter().map(|&g| g < a / d).collect();
        let pullback: Vec<bool> = (0..field.grid.len())
            .into_par_iter()
            .map(|i| green_value(poly, poly.eval(field.grid.center_of(i)), params, DEFAULT_SERIES_TERMS) < a)
            .collect();
        let pullback_mismatch = pullback.iter().zip(&u_a_over_d).filter(|(p, q)| p != q).count();
        let corona = u_a.iter().zip(&u_a_over_d).map(|(&u, &v)| u && !v).collect();
        Ok(LevelRegion {
            a,
            grid: field.grid,
            u_a,
            u_a_over_d,
            pullback,
            pullback_mismatch,
            corona,
        })
    }

    pub fn corona_cells(&self) -> usize {
        self.corona.iter().filter(|&&c| c).count()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoronaReport {
    pub a: f64,
    pub ell: f64,
    pub spacing: f64,
    pub corona_cells: usize,
    pub k_ell_cells: usize,
    pub pullback_mismatch: usize,
    /// `min (G_{K_ell,U_a} + 1) / (G_{K,U_a} + 1)` over the corona.
    pub delta_hat: f64,
    pub argmin: Complex64,
    pub relax_k: RelaxStats,
    pub relax_k_ell: RelaxStats,
}

/// The corona of level `a` and the constant `delta` comparing the relative
/// Green functions of `K` and of `K_ell = {dist(., K) <= ell}` in `U_a`.
#[allow(clippy::too_many_arguments)]
pub fn corona_and_delta<D: DistanceOracle + ?Sized>(
    poly: &Polynomial,
    params: &EscapeParams,
    a: f64,
    ell: f64,
    grid: &GridSpec,
    oracle: &D,
    opts: &RelaxOptions,
) -> Result<(LevelRegion, CoronaReport)> {
    if !(ell >= 0.0) {
        return Err(Error::Precondition(format!(
            "dilation radius {ell} must be nonnegative"
        )));
    }
    let field = green_field(poly, grid, params, DEFAULT_SERIES_TERMS);
    let region_k = sublevel_region(&field, a)?;
    let level = LevelRegion::new(poly, params, &field, a)?;
    let k_ell: Vec<bool> = dilate(oracle, grid, ell)
        .into_iter()
        .zip(&region_k.a_mask)
        .map(|(x, &k)| x || k)
        .collect();
    if let Some(i) = (0..grid.len()).find(|&i| k_ell[i] && !level.u_a_over_d[i]) {
        return Err(Error::Precondition(format!(
            "K_ell for ell = {ell} leaves U_(a/d) at {}",
            grid.center_of(i)
        )));
    }
    let k_ell_cells = k_ell.iter().filter(|&&b| b).count();
    let region_ell = RegionMask::new(*grid, k_ell, region_k.u_mask.clone())?;
    let (rk, re) = rayon::join(
        || relax_with(&region_k, opts, None),
        || relax_with(&region_ell, opts, None),
    );
    let (rk, re) = (rk?, re?);
    let (delta_hat, at) = (0..grid.len())
        .filter(|&i| level.corona[i])
        .map(|i| ((re.field.values[i] + 1.0) / (rk.field.values[i] + 1.0), i))
        .fold((f64::INFINITY, usize::MAX), |acc, x| if x.0 < acc.0 { x } else { acc });
    if at == usize::MAX {
        return Err(Error::Precondition("the corona has no cells on this grid".into()));
    }
    let report = CoronaReport {
        a,
        ell,
        spacing: grid.spacing,
        corona_cells: level.corona_cells(),
        k_ell_cells,
        pullback_mismatch: level.pullback_mismatch,
        delta_hat,
        argmin: grid.center_of(at),
        relax_k: rk.stats,
        relax_k_ell: re.stats,
    };
    Ok((level, report))
}
