use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GreenSource;
use crate::boundary::DistanceOracle;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::parallel::substream;

/// Draws per sample before a band sampler gives up on that sample.
const MAX_ATTEMPTS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && lo < hi && hi < 1.0) {
            return Err(Error::Precondition(format!(
                "distance band [{lo}, {hi}] must satisfy 0 < lo < hi < 1"
            )));
        }
        Ok(Band { lo, hi })
    }

    pub fn contains(&self, d: f64) -> bool {
        d >= self.lo && d <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitSample {
    pub z: Complex64,
    pub ln_dist: f64,
    pub ln_green: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentFit {
    pub band: Band,
    pub samples: Vec<FitSample>,
    pub slope: f64,
    pub intercept: f64,
    /// `max ln G / ln dist`.
    pub sup_ratio: f64,
    pub sup_point: Complex64,
}

/// Least-squares fit of `ln G` on `ln dist` over the points whose distance
/// lies in the band and where `G > 0`.
pub fn fit_points<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    points: &[Complex64],
    band: Band,
) -> Result<ExponentFit> {
    let samples: Vec<FitSample> = points
        .par_iter()
        .filter_map(|&z| {
            let d = oracle.dist(z);
            if !band.contains(d) {
                return None;
            }
            let lg = source.ln_green(z);
            lg.is_finite().then(|| FitSample {
                z,
                ln_dist: d.ln(),
                ln_green: lg,
            })
        })
        .collect();
    if samples.len() < 2 {
        return Err(Error::Precondition(format!(
            "only {} usable samples in band [{}, {}]",
            samples.len(),
            band.lo,
            band.hi
        )));
    }
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.ln_dist).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.ln_green).sum::<f64>() / n;
    let sxy: f64 = samples.iter().map(|s| (s.ln_dist - mx) * (s.ln_green - my)).sum();
    let sxx: f64 = samples.iter().map(|s| (s.ln_dist - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let (sup_ratio, sup_point) = samples.iter().map(|s| (s.ln_green / s.ln_dist, s.z)).fold(
        (f64::NEG_INFINITY, Complex64::new(f64::NAN, f64::NAN)),
        |acc, x| {
            if x.0 > acc.0 {
                x
            } else {
                acc
            }
        },
    );
    Ok(ExponentFit {
        band,
        slope,
        intercept: my - slope * mx,
        sup_ratio,
        sup_point,
        samples,
    })
}

/// `n` points drawn uniformly from the rectangle of `domain`, each
/// rejection-sampled until its distance lies in `band`. Sample `i` uses its
/// own substream, so the set does not depend on scheduling.
pub fn sample_band<D: DistanceOracle + ?Sized>(
    oracle: &D,
    domain: &GridSpec,
    band: Band,
    n: usize,
    seed: u64,
) -> Vec<Complex64> {
    let (x0, y0, x1, y1) = (domain.x0, domain.y0, domain.x_hi(), domain.y_hi());
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = substream(seed, i as u64);
            (0..MAX_ATTEMPTS).find_map(|_| {
                let z = Complex64::new(rng.random_range(x0..x1), rng.random_range(y0..y1));
                band.contains(oracle.dist(z)).then_some(z)
            })
        })
        .collect()
}

/// Samples `n` exterior points with distance in the band and fits them.
pub fn fit_exponent<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    domain: &GridSpec,
    band: Band,
    n: usize,
    seed: u64,
) -> Result<ExponentFit> {
    if band.lo < 2.0 * oracle.resolution() {
        return Err(Error::Precondition(format!(
            "band starts at {} inside the oracle's resolution {}",
            band.lo,
            oracle.resolution()
        )));
    }
    let pts = sample_band(oracle, domain, band, n, seed);
    fit_points(source, oracle, &pts, band)
}

/// One rung of an obstruction ladder: a grid and the distance band scanned on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionScale {
    pub grid: GridSpec,
    pub band: Band,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleResult {
    pub band: Band,
    pub spacing: f64,
    pub cells: usize,
    pub sup_ratio: f64,
    pub argmax: Complex64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub scales: Vec<ScaleResult>,
    /// At least three scales with strictly increasing `sup_ratio`.
    pub divergent: bool,
    /// `(max - min) / min` of the per-scale ratios.
    pub variation: f64,
    /// Aitken extrapolation of the last three argmax locations.
    pub argmax_limit: Option<Complex64>,
}

/// Per-scale maximum of `ln G / ln dist` over the grid cells whose distance
/// falls in that scale's band.
pub fn obstruction_scan<S: GreenSource + ?Sized, D: DistanceOracle + ?Sized>(
    source: &S,
    oracle: &D,
    ladder: &[ObstructionScale],
) -> Result<ObstructionReport> {
    for pair in ladder.windows(2) {
        if !(pair[1].band.hi < pair[0].band.hi && pair[1].band.lo < pair[0].band.lo) {
            return Err(Error::Precondition(
                "bands must shrink strictly along the ladder".into(),
            ));
        }
    }
    let mut scales = Vec::with_capacity(ladder.len());
    for s in ladder {
        let floor = 2.0 * s.grid.spacing.max(oracle.resolution());
        if s.band.lo < floor * (1.0 - 1e-12) {
            return Err(Error::Precondition(format!(
                "band [{}, {}] reaches below the guard {floor} of its grid",
                s.band.lo, s.band.hi
            )));
        }
        let best = (0..s.grid.len())
            .into_par_iter()
            .filter_map(|i| {
                let z = s.grid.center_of(i);
                let d = oracle.dist(z);
                if !s.band.contains(d) {
                    return None;
                }
                let lg = source.ln_green(z);
                lg.is_finite().then_some((lg / d.ln(), i))
            })
            .map(|(r, i)| (r, i, 1usize))
            .reduce(
                || (f64::NEG_INFINITY, usize::MAX, 0),
                |a, b| {
                    let n = a.2 + b.2;
                    // larger ratio wins, ties go to the lower cell index
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        (b.0, b.1, n)
                    } else {
                        (a.0, a.1, n)
                    }
                },
            );
        if best.2 == 0 {
            return Err(Error::Precondition(format!(
                "no cell of the grid has distance in [{}, {}]",
                s.band.lo, s.band.hi
            )));
        }
        scales.push(ScaleResult {
            band: s.band,
            spacing: s.grid.spacing,
            cells: best.2,
            sup_ratio: best.0,
            argmax: s.grid.center_of(best.1),
        });
    }
    let ratios: Vec<f64> = scales.iter().map(|s| s.sup_ratio).collect();
    let divergent = ratios.len() >= 3 && ratios.windows(2).all(|w| w[1] > w[0]);
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| (l.min(r), h.max(r)));
    let argmax_limit = (scales.len() >= 3).then(|| {
        let n = scales.len();
        let [a, b, c] = [scales[n - 3].argmax, scales[n - 2].argmax, scales[n - 1].argmax];
        Complex64::new(aitken(a.re, b.re, c.re), aitken(a.im, b.im, c.im))
    });
    Ok(ObstructionReport {
        scales,
        divergent,
        variation: (hi - lo) / lo,
        argmax_limit,
    })
}

/// Aitken's delta-squared limit of `x0, x1, x2`; the last term when the
/// second difference vanishes.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d2 = x2 - 2.0 * x1 + x0;
    if d2 == 0.0 || !d2.is_finite() {
        x2
    } else {
        x2 - (x2 - x1).powi(2) / d2
    }
}
