//! Windows and ladders for the tangent-disks counterexample and its
//! single-disk control.
//!
//! Near the cusp `G ~ 2 exp(-pi / y)` and `dist ~ y^2 / 2`, so every level
//! `c` is violated once `y` is small enough, but only on grids fine enough
//! for the guard band to sit below the violation. The scan windows therefore
//! shrink geometrically up the imaginary axis with spacing `~ y^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::{Band, ObstructionScale};
use super::scan::{scan_oc, LSScanReport};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::models::TangentDisks;

/// Window `k` covers `y in [y_k / 2, y_k]`, `y_k = 2^{-k-1}`, in a strip
/// of 41 columns centred on the imaginary axis, with `h = y_k^2 / 200`.
pub fn cusp_window(k: usize) -> GridSpec {
    let yk = 0.5 * 0.5f64.powi(k as i32);
    let h = yk * yk / 200.0;
    let ny = ((0.5 * yk) / h).ceil() as usize;
    GridSpec {
        x0: -20.5 * h,
        y0: 0.5 * yk,
        spacing: h,
        nx: 41,
        ny,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuspScan {
    pub c: f64,
    /// Windows scanned, the last one being reported.
    pub windows: usize,
    pub report: LSScanReport,
}

/// Scans successive cusp windows at level `c` with guard `2h` until one is
/// nonempty or `max_windows` have been tried.
pub fn cusp_scan(c: f64, max_windows: usize) -> Result<CuspScan> {
    let model = TangentDisks;
    let mut last = None;
    for k in 0..max_windows.max(1) {
        let g = cusp_window(k);
        let report = scan_oc(&model, &model, &g, c, 2.0 * g.spacing)?;
        let done = !report.is_empty();
        last = Some(CuspScan {
            c,
            windows: k + 1,
            report,
        });
        if done {
            break;
        }
    }
    Ok(last.expect("at least one window"))
}

fn band_at(k: usize) -> Band {
    let lo = 0.05 * 0.25f64.powi(k as i32);
    Band { lo, hi: 4.0 * lo }
}

/// Bands `[0.05, 0.2] / 4^k` on upper-half windows over the cusp, with
/// spacing `lo / 16`. A column of cells sits on the imaginary axis.
pub fn cusp_ladder(scales: usize) -> Vec<ObstructionScale> {
    (0..scales)
        .map(|k| {
            let band = band_at(k);
            let h = band.lo / 16.0;
            let reach = (2.0 * band.hi).sqrt();
            let half = (0.25 * reach / h).ceil() as usize;
            ObstructionScale {
                grid: GridSpec {
                    x0: -(half as f64 + 0.5) * h,
                    y0: 0.0,
                    spacing: h,
                    nx: 2 * half + 1,
                    ny: (1.25 * reach / h).ceil() as usize,
                },
                band,
            }
        })
        .collect()
}

/// The same bands on windows just outside the unit circle at `z = 1`.
pub fn circle_ladder(scales: usize) -> Vec<ObstructionScale> {
    (0..scales)
        .map(|k| {
            let band = band_at(k);
            let h = band.lo / 16.0;
            let width = 1.25 * band.hi;
            let half = (0.5 * width / h).ceil() as usize;
            ObstructionScale {
                grid: GridSpec {
                    x0: 1.0,
                    y0: -(half as f64 + 0.5) * h,
                    spacing: h,
                    nx: (width / h).ceil() as usize,
                    ny: 2 * half + 1,
                },
                band,
            }
        })
        .collect()
}

/// Points `i y` on the imaginary axis, `y` log-spaced over the range where
/// `dist = sqrt(1 + y^2) - 1` covers `band`.
pub fn cusp_axis_points(band: Band, n: usize) -> Vec<Complex64> {
    let y_of = |d: f64| ((1.0 + d) * (1.0 + d) - 1.0).sqrt();
    let (a, b) = (y_of(band.lo).ln(), y_of(band.hi).ln());
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1).max(1) as f64;
            Complex64::new(0.0, (a + t * (b - a)).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::DistanceOracle;
    use crate::lsgate::{fit_points, obstruction_scan};
    use crate::models::DiskModel;

    #[test]
    fn windows_respect_the_guard() {
        let m = TangentDisks;
        for k in 0..6 {
            let g = cusp_window(k);
            // lowest cell sits well above the guard 2h
            assert!(m.dist(g.center(20, 0)) > 4.0 * g.spacing);
            assert_eq!(g.center(20, 0).re, 0.0);
        }
    }

    #[test]
    fn every_level_is_violated_somewhere() {
        for c in [0.5, 0.3, 0.1] {
            let s = cusp_scan(c, 8).unwrap();
            assert!(!s.report.is_empty(), "c = {c}");
        }
    }

    #[test]
    fn finer_band_has_larger_ratio_on_the_axis() {
        let m = TangentDisks;
        let coarse = fit_points(
            &m,
            &m,
            &cusp_axis_points(Band { lo: 0.05, hi: 0.2 }, 200),
            Band { lo: 0.05, hi: 0.2 },
        )
        .unwrap();
        let fine_band = Band { lo: 0.0125, hi: 0.05 };
        let fine = fit_points(&m, &m, &cusp_axis_points(fine_band, 200), fine_band).unwrap();
        assert!(fine.sup_ratio > coarse.sup_ratio);
    }

    #[test]
    fn ladders_separate_cusp_from_circle() {
        let m = TangentDisks;
        let cusp = obstruction_scan(&m, &m, &cusp_ladder(3)).unwrap();
        assert!(cusp.divergent, "{:?}", cusp.scales);
        let d = DiskModel::unit();
        let circle = obstruction_scan(&d, &d, &circle_ladder(3)).unwrap();
        assert!(!circle.divergent);
        assert!(circle.variation < 0.1);
    }
}
