use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GreenSource;
use crate::boundary::DistanceOracle;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

pub const DEFAULT_LADDER: [f64; 6] = [0.8, 0.6, 0.4, 0.2, 0.1, 0.05];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Empty,
    Nonempty,
}

/// A cell where `G < c dist^{1/c}` with `guard <= dist < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlaggedCell {
    pub index: usize,
    pub z: Complex64,
    pub green: f64,
    pub ln_green: f64,
    pub dist: f64,
    /// `c dist^{1/c}`.
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LSScanReport {
    pub c: f64,
    pub guard: f64,
    pub grid: GridSpec,
    pub cells_in_band: usize,
    pub verdict: Verdict,
    pub flagged: Vec<FlaggedCell>,
}

impl LSScanReport {
    pub fn is_empty(&self) -> bool {
        self.verdict == Verdict::Empty
    }
}

/// Smallest admissible guard for a grid and oracle.
pub fn min_guard(spacing: f64, resolution: f64) -> f64 {
    2.0 * spacing.max(resolution)
}

/// `ln c + ln(dist) / c`, the log of the right-hand side.
#[inline]
pub fn ln_rhs(c: f64, dist: f64) -> f64 {
    c.ln() + dist.ln() / c
}

pub(crate) fn check_level(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Precondition(format!("level c = {c} must lie in (0, 1)")));
    }
    Ok(())
}

/// Flags every cell centre with `guard <= dist < 1` and `G < c dist^{1/c}`.
///
/// The comparison is made between logarithms, so it stays meaningful where
/// both sides underflow.
pub fn scan_oc<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    grid: &GridSpec,
    c: f64,
    guard: f64,
) -> Result<LSScanReport> {
    check_level(c)?;
    let floor = min_guard(grid.spacing, oracle.resolution());
    if !(guard >= floor * (1.0 - 1e-12)) {
        return Err(Error::Precondition(format!(
            "guard {guard} is below 2 max(h, resolution) = {floor}"
        )));
    }
    let cells: Vec<(bool, Option<FlaggedCell>)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let z = grid.center_of(i);
            let dist = oracle.dist(z);
            if !(dist >= guard && dist < 1.0) {
                return (false, None);
            }
            let lg = source.ln_green(z);
            let lr = ln_rhs(c, dist);
            let flagged = (lg < lr).then(|| FlaggedCell {
                index: i,
                z,
                green: lg.exp(),
                ln_green: lg,
                dist,
                rhs: lr.exp(),
            });
            (true, flagged)
        })
        .collect();
    let cells_in_band = cells.iter().filter(|(b, _)| *b).count();
    let flagged: Vec<FlaggedCell> = cells.into_iter().filter_map(|(_, f)| f).collect();
    Ok(LSScanReport {
        c,
        guard,
        grid: *grid,
        cells_in_band,
        verdict: if flagged.is_empty() {
            Verdict::Empty
        } else {
            Verdict::Nonempty
        },
        flagged,
    })
}

/// `flagged(lower) ⊆ flagged(higher)` for scans at `lower.c <= higher.c`.
pub fn monotone_oc_check(lower: &LSScanReport, higher: &LSScanReport) -> Result<bool> {
    if lower.grid != higher.grid || lower.guard != higher.guard {
        return Err(Error::Precondition("scans must share grid and guard".into()));
    }
    if lower.c > higher.c {
        return Err(Error::Precondition(format!(
            "levels out of order: {} > {}",
            lower.c, higher.c
        )));
    }
    // both lists are in cell order
    let mut it = higher.flagged.iter().map(|f| f.index).peekable();
    for f in &lower.flagged {
        while it.peek().is_some_and(|&j| j < f.index) {
            it.next();
        }
        if it.peek() != Some(&f.index) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub c: f64,
    pub flagged: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CStarReport {
    pub guard: f64,
    pub grid: GridSpec,
    /// Levels in descending order.
    pub levels: Vec<LevelSummary>,
    pub c_star: Option<f64>,
    /// Every level below `c_star` is empty and consecutive scans nest.
    pub monotone: bool,
    #[serde(skip)]
    pub scans: Vec<LSScanReport>,
}

/// Largest ladder level whose scan is empty.
///
/// Every level is scanned so the nesting of the obstruction sets can be
/// asserted along the way.
pub fn find_c_star<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    grid: &GridSpec,
    guard: f64,
    ladder: &[f64],
) -> Result<CStarReport> {
    let mut levels: Vec<f64> = ladder.to_vec();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let scans: Vec<LSScanReport> = levels
        .iter()
        .map(|&c| scan_oc(source, oracle, grid, c, guard))
        .collect::<Result<_>>()?;
    let c_star = scans.iter().find(|s| s.is_empty()).map(|s| s.c);
    let mut monotone = true;
    for pair in scans.windows(2) {
        monotone &= monotone_oc_check(&pair[1], &pair[0])?;
    }
    if let Some(cs) = c_star {
        monotone &= scans.iter().filter(|s| s.c < cs).all(LSScanReport::is_empty);
    }
    Ok(CStarReport {
        guard,
        grid: *grid,
        levels: scans
            .iter()
            .map(|s| LevelSummary {
                c: s.c,
                flagged: s.flagged.len(),
                verdict: s.verdict,
            })
            .collect(),
        c_star,
        monotone,
        scans,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilityReport {
    pub c: f64,
    pub coarse: LevelSummary,
    pub fine: LevelSummary,
    pub guard_coarse: f64,
    pub guard_fine: f64,
    /// False when an empty verdict at `h` turns nonempty at `h/2`.
    pub stable: bool,
}

/// Repeats a scan on the refined grid. The guard is kept unless the finer
/// grid's own floor exceeds it.
pub fn verdict_stability<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    grid: &GridSpec,
    c: f64,
    guard: f64,
) -> Result<StabilityReport> {
    let coarse = scan_oc(source, oracle, grid, c, guard)?;
    let fine_grid = grid.refined();
    let guard_fine = guard.max(min_guard(fine_grid.spacing, oracle.resolution()));
    let fine = scan_oc(source, oracle, &fine_grid, c, guard_fine)?;
    let summary = |s: &LSScanReport| LevelSummary {
        c: s.c,
        flagged: s.flagged.len(),
        verdict: s.verdict,
    };
    Ok(StabilityReport {
        c,
        stable: !(coarse.is_empty() && !fine.is_empty()),
        coarse: summary(&coarse),
        fine: summary(&fine),
        guard_coarse: guard,
        guard_fine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::DiskModel;

    fn disk_grid() -> GridSpec {
        GridSpec::square(Complex64::new(0.0, 0.0), 2.2, 0.01).unwrap()
    }

    #[test]
    fn unit_disk_half_level_is_empty() {
        let d = DiskModel::unit();
        let r = scan_oc(&d, &d, &disk_grid(), 0.5, 0.02).unwrap();
        assert_eq!(r.verdict, Verdict::Empty);
        assert!(r.cells_in_band > 0);
    }

    #[test]
    fn unit_disk_high_level_is_nonempty() {
        let d = DiskModel::unit();
        let r = scan_oc(&d, &d, &disk_grid(), 0.99, 0.02).unwrap();
        assert_eq!(r.verdict, Verdict::Nonempty);
        for f in &r.flagged {
            assert!(f.dist >= 0.02 && f.dist < 1.0 && f.green < f.rhs);
        }
        // |z| = 1.9: ln 1.9 < 0.99 * 0.9^{1/0.99}
        assert!(r.flagged.iter().any(|f| (f.z.norm() - 1.9).abs() < 0.01));
    }

    #[test]
    fn guard_floor_is_enforced() {
        let d = DiskModel::unit();
        assert!(matches!(
            scan_oc(&d, &d, &disk_grid(), 0.5, 0.01),
            Err(Error::Precondition(_))
        ));
        assert!(scan_oc(&d, &d, &disk_grid(), 1.0, 0.02).is_err());
    }

    #[test]
    fn ladder_nests() {
        let d = DiskModel::unit();
        let g = disk_grid();
        let lo = scan_oc(&d, &d, &g, 0.7, 0.02).unwrap();
        let hi = scan_oc(&d, &d, &g, 0.9, 0.02).unwrap();
        assert!(lo.flagged.len() < hi.flagged.len());
        assert!(monotone_oc_check(&lo, &hi).unwrap());
        assert!(monotone_oc_check(&hi, &hi).unwrap());
        assert!(monotone_oc_check(&hi, &lo).is_err());
    }
}
