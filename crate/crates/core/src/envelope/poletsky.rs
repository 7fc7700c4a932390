//! Monte Carlo upper bounds for the relative Green function from analytic
//! discs: for any disc `h` in `U` with `h(0) = z`, `G_{A,U}(z)` is at most
//! minus the share of the boundary circle that `h` maps into `A`.
//!
//! Two families are sampled. Polynomial discs `z + sum a_k zeta^k` cover
//! generic shapes. Arc-exponential discs
//! `p + (z - p) exp(s (f - H(rho zeta)))`, with `Re H` the harmonic measure
//! of an arc of length `2 pi f`, shrink that arc towards an anchor `p` in
//! `A` and push the rest outwards; for concentric annuli they attain the
//! infimum in the limit `rho -> 1`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RegionMask;
use crate::boundary::NearestIndex;
use crate::error::{Error, Result};
use crate::parallel::substream;

/// Boundary quadrature points per disc.
pub const QUADRATURE: usize = 256;
/// Angles and radii of the polar validity net.
const NET_ANGLES: usize = 64;
const NET_RADII: usize = 16;
/// Samples per batch; the incumbent used for perturbations changes only
/// between batches.
const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoletskyOptions {
    pub n_discs: usize,
    pub max_degree: usize,
    pub radius_scale: f64,
    pub seed: u64,
}

impl Default for PoletskyOptions {
    fn default() -> Self {
        PoletskyOptions {
            n_discs: 20_000,
            max_degree: 6,
            radius_scale: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DiscFamily {
    Constant,
    /// `h(zeta) = z + sum_k a_k zeta^k`, `coeffs = [a_1, .., a_m]`.
    Polynomial {
        coeffs: Vec<Complex64>,
    },
    /// Arc `(theta, theta + 2 pi f)` of the circle `|zeta| = rho` squeezed
    /// towards `anchor` with strength `s`.
    ArcExponential {
        anchor: Complex64,
        theta: f64,
        f: f64,
        s: f64,
        rho: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscSample {
    pub center: Complex64,
    pub family: DiscFamily,
    /// Share of the boundary quadrature points mapped into `A`.
    pub boundary_fraction: f64,
    /// `h` maps the closed disc into `U`, checked on the polar net.
    pub valid: bool,
}

impl DiscSample {
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        eval_disc(self.center, &self.family, zeta)
    }
}

fn eval_disc(z: Complex64, family: &DiscFamily, zeta: Complex64) -> Complex64 {
    match family {
        DiscFamily::Constant => z,
        DiscFamily::Polynomial { coeffs } => {
            let tail = coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &a| (acc + a) * zeta);
            z + tail
        }
        DiscFamily::ArcExponential {
            anchor,
            theta,
            f,
            s,
            rho,
        } => {
            let w = zeta * *rho;
            let e1 = Complex64::from_polar(1.0, -theta);
            let e2 = Complex64::from_polar(1.0, -(theta + TAU * f));
            let one = Complex64::new(1.0, 0.0);
            // f - H(w), with Re H the harmonic measure of the arc
            let g = Complex64::new(0.0, 1.0 / PI) * ((one - w * e2).ln() - (one - w * e1).ln());
            anchor + (z - anchor) * (g * *s).exp()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoletskyEstimate {
    pub z: Complex64,
    /// `-max boundary_fraction` over the valid sampled discs.
    pub estimate: f64,
    pub n_discs: usize,
    /// Discs that passed the full validity check.
    pub validated: usize,
    pub best: DiscSample,
}

/// Precomputed masks for repeated estimates on one region.
pub struct PoletskyContext<'a> {
    region: &'a RegionMask,
    /// `U` eroded by one cell, including diagonals.
    safe: Vec<bool>,
    outside: NearestIndex,
    a_cells: Vec<Complex64>,
    anchor: Complex64,
}

impl<'a> PoletskyContext<'a> {
    pub fn new(region: &'a RegionMask) -> Self {
        let g = &region.grid;
        let u = &region.u_mask;
        let safe = (0..g.len())
            .map(|i| {
                let (ix, iy) = g.coords(i);
                if !u[i] || g.is_edge(ix, iy) {
                    return false;
                }
                (iy - 1..=iy + 1).all(|y| (ix - 1..=ix + 1).all(|x| u[g.index(x, y)]))
            })
            .collect();
        let outside_pts: Vec<Complex64> = (0..g.len()).filter(|&i| !u[i]).map(|i| g.center_of(i)).collect();
        let a_cells: Vec<Complex64> = (0..g.len())
            .filter(|&i| region.a_mask[i])
            .map(|i| g.center_of(i))
            .collect();
        let centroid = a_cells.iter().sum::<Complex64>() / a_cells.len() as f64;
        let anchor = match g.cell_of(centroid) {
            Some((ix, iy)) if region.a_mask[g.index(ix, iy)] => g.center(ix, iy),
            _ => *a_cells
                .iter()
                .min_by(|p, q| (**p - centroid).norm().total_cmp(&(**q - centroid).norm()))
                .expect("A is nonempty"),
        };
        PoletskyContext {
            region,
            safe,
            outside: NearestIndex::build(outside_pts, g.spacing),
            a_cells,
            anchor,
        }
    }

    fn cell(&self, w: Complex64) -> Option<usize> {
        let g = &self.region.grid;
        g.cell_of(w).map(|(ix, iy)| g.index(ix, iy))
    }

    fn in_safe(&self, w: Complex64) -> bool {
        self.cell(w).is_some_and(|i| self.safe[i])
    }

    fn in_a(&self, w: Complex64) -> bool {
        self.cell(w).is_some_and(|i| self.region.a_mask[i])
    }

    /// Distance from `z` to the complement of `U`, capped by the grid frame.
    fn reach(&self, z: Complex64) -> f64 {
        let g = &self.region.grid;
        let frame = (z.re - g.x0).min(g.x_hi() - z.re).min(z.im - g.y0).min(g.y_hi() - z.im);
        self.outside.nearest(z).map_or(frame, |(_, d)| d.min(frame))
    }

    /// Boundary fraction, or `None` when a boundary image leaves safe `U`.
    fn boundary_fraction(&self, z: Complex64, family: &DiscFamily) -> Option<f64> {
        let mut hits = 0usize;
        for j in 0..QUADRATURE {
            let w = eval_disc(
                z,
                family,
                Complex64::from_polar(1.0, TAU * j as f64 / QUADRATURE as f64),
            );
            if !self.in_safe(w) {
                return None;
            }
            hits += self.in_a(w) as usize;
        }
        Some(hits as f64 / QUADRATURE as f64)
    }

    fn net_valid(&self, z: Complex64, family: &DiscFamily) -> bool {
        (1..=NET_RADII).all(|r| {
            let rad = r as f64 / NET_RADII as f64;
            (0..NET_ANGLES).all(|k| {
                let zeta = Complex64::from_polar(rad, TAU * (k as f64 + 0.5) / NET_ANGLES as f64);
                self.in_safe(eval_disc(z, family, zeta))
            })
        })
    }

    fn fresh(&self, z: Complex64, i: usize, rng: &mut impl Rng, opts: &PoletskyOptions) -> DiscFamily {
        let reach = opts.radius_scale * self.reach(z);
        if i.is_multiple_of(4) || opts.max_degree == 0 {
            let m = rng.random_range(1..=opts.max_degree.max(1));
            let sigma = reach * rng.random::<f64>() / (2.0 * m as f64).sqrt();
            let coeffs = (0..m).map(|_| gaussian(rng) * sigma).collect();
            return DiscFamily::Polynomial { coeffs };
        }
        let anchor = if rng.random::<bool>() {
            self.anchor
        } else {
            self.a_cells[rng.random_range(0..self.a_cells.len())]
        };
        let lever = (z - anchor).norm().max(self.region.grid.spacing);
        let e_max = (1.0 + 2.0 * reach / lever).ln();
        let f = rng.random_range(0.02..0.98);
        DiscFamily::ArcExponential {
            anchor,
            theta: rng.random_range(0.0..TAU),
            f,
            s: rng.random::<f64>() * e_max / f,
            rho: 1.0 - 10f64.powf(rng.random_range(-4.0..-2.0)),
        }
    }

    fn perturb(&self, family: &DiscFamily, rng: &mut impl Rng) -> DiscFamily {
        let tau = 10f64.powf(rng.random_range(-2.0..0.0));
        let mut n = || rng.sample::<f64, _>(StandardNormal) * tau;
        match family {
            DiscFamily::Constant => DiscFamily::Constant,
            DiscFamily::Polynomial { coeffs } => {
                let scale = coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max) * 0.1;
                let coeffs = coeffs.iter().map(|&a| a + Complex64::new(n(), n()) * scale).collect();
                DiscFamily::Polynomial { coeffs }
            }
            DiscFamily::ArcExponential {
                anchor,
                theta,
                f,
                s,
                rho,
            } => {
                let h = self.region.grid.spacing;
                let f2 = (f + 0.05 * n()).clamp(0.005, 0.995);
                DiscFamily::ArcExponential {
                    anchor: anchor + Complex64::new(n(), n()) * h,
                    theta: *theta,
                    f: f2,
                    // keep the outward push s f roughly fixed while f moves
                    s: s * f / f2 * (0.1 * n()).exp(),
                    rho: 1.0 - ((1.0 - rho) * (0.5 * n()).exp()).clamp(1e-5, 0.1),
                }
            }
        }
    }

    /// Best boundary fraction after each prefix length in `checkpoints`,
    /// together with the overall best disc.
    fn run(
        &self,
        z: Complex64,
        opts: &PoletskyOptions,
        checkpoints: &[usize],
    ) -> Result<(Vec<f64>, DiscSample, usize)> {
        let zi = self.cell(z).filter(|&i| self.region.u_mask[i]);
        let Some(zi) = zi else {
            return Err(Error::Precondition(format!("{z} is not in U")));
        };
        let constant = DiscSample {
            center: z,
            family: DiscFamily::Constant,
            boundary_fraction: if self.region.a_mask[zi] { 1.0 } else { 0.0 },
            valid: true,
        };
        let mut best = constant;
        let mut validated = 0usize;
        let mut out = Vec::with_capacity(checkpoints.len());
        let mut next_cp = 0;
        let total = opts.n_discs;
        let mut start = 0;
        let record = |upto: usize, best: &DiscSample, out: &mut Vec<f64>, next_cp: &mut usize| {
            while *next_cp < checkpoints.len() && checkpoints[*next_cp] <= upto {
                out.push(best.boundary_fraction);
                *next_cp += 1;
            }
        };
        record(0, &best, &mut out, &mut next_cp);
        while start < total {
            let end = (start + BATCH).min(total);
            let incumbent = best.clone();
            let results: Vec<Option<DiscSample>> = (start..end)
                .into_par_iter()
                .map(|i| {
                    let mut rng = substream(opts.seed, i as u64);
                    let family = if i % 2 == 1 && incumbent.family != DiscFamily::Constant {
                        self.perturb(&incumbent.family, &mut rng)
                    } else {
                        self.fresh(z, i, &mut rng, opts)
                    };
                    let frac = self.boundary_fraction(z, &family)?;
                    // only discs that could improve the incumbent need the net check
                    (frac > incumbent.boundary_fraction && self.net_valid(z, &family)).then_some(DiscSample {
                        center: z,
                        family,
                        boundary_fraction: frac,
                        valid: true,
                    })
                })
                .collect();
            for (k, r) in results.into_iter().enumerate() {
                if let Some(s) = r {
                    validated += 1;
                    if s.boundary_fraction > best.boundary_fraction {
                        best = s;
                    }
                }
                record(start + k + 1, &best, &mut out, &mut next_cp);
            }
            start = end;
        }
        record(usize::MAX, &best, &mut out, &mut next_cp);
        Ok((out, best, validated))
    }

    pub fn estimate(&self, z: Complex64, opts: &PoletskyOptions) -> Result<PoletskyEstimate> {
        let (_, best, validated) = self.run(z, opts, &[])?;
        Ok(PoletskyEstimate {
            z,
            estimate: -best.boundary_fraction,
            n_discs: opts.n_discs,
            validated,
            best,
        })
    }

    /// Estimates after the first `n` discs for each `n` in the ascending list
    /// `checkpoints`, from a single run; equal to separate runs with
    /// `n_discs = n`.
    pub fn trace(&self, z: Complex64, opts: &PoletskyOptions, checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
        if checkpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Precondition("checkpoints must be ascending".into()));
        }
        let run_opts = PoletskyOptions {
            n_discs: checkpoints.last().copied().unwrap_or(0),
            ..*opts
        };
        let (fr, _, _) = self.run(z, &run_opts, checkpoints)?;
        Ok(checkpoints.iter().zip(fr).map(|(&n, f)| (n, -f)).collect())
    }
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Upper bound for `G_{A,U}(z)` from `n_discs` sampled analytic discs.
pub fn poletsky_estimate(z: Complex64, region: &RegionMask, opts: &PoletskyOptions) -> Result<PoletskyEstimate> {
    PoletskyContext::new(region).estimate(z, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn annulus(h: f64) -> RegionMask {
        let g = GridSpec::square(Complex64::new(0.0, 0.0), 2.1, h).unwrap();
        RegionMask::from_fn(g, |z| z.norm() <= 0.5, |z| z.norm() < 2.0).unwrap()
    }

    #[test]
    fn arc_harmonic_measure() {
        let fam = DiscFamily::ArcExponential {
            anchor: Complex64::new(0.0, 0.0),
            theta: 0.3,
            f: 0.25,
            s: 1.0,
            rho: 0.9999,
        };
        let z = Complex64::new(1.0, 0.0);
        assert_eq!(eval_disc(z, &fam, Complex64::new(0.0, 0.0)), z);
        // |h| = exp(s (f - omega)) on the circle: omega = 1 on the arc, 0 off it
        let on = eval_disc(z, &fam, Complex64::from_polar(1.0, 0.3 + 0.25 * PI));
        let off = eval_disc(z, &fam, Complex64::from_polar(1.0, 0.3 + 1.5 * PI));
        assert!((on.norm().ln() - (0.25 - 1.0)).abs() < 1e-3);
        assert!((off.norm().ln() - 0.25).abs() < 1e-3);
    }

    #[test]
    fn inside_a_gives_minus_one() {
        let r = annulus(0.05);
        let e = poletsky_estimate(
            Complex64::new(0.1, 0.0),
            &r,
            &PoletskyOptions {
                n_discs: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.estimate, -1.0);
        assert_eq!(e.best.family, DiscFamily::Constant);
    }

    #[test]
    fn unreachable_obstacle_gives_zero() {
        let g = GridSpec::square(Complex64::new(0.0, 0.0), 3.0, 0.05).unwrap();
        // U has two components; discs at z cannot reach A
        let r = RegionMask::from_fn(g, |z| z.norm() < 0.3, |z| z.norm() < 0.6 || (z - 2.0).norm() < 0.5).unwrap();
        let e = poletsky_estimate(
            Complex64::new(2.0, 0.0),
            &r,
            &PoletskyOptions {
                n_discs: 512,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(e.estimate, 0.0);
    }

    #[test]
    fn outside_u_is_refused() {
        let r = annulus(0.05);
        assert!(poletsky_estimate(Complex64::new(2.05, 0.0), &r, &Default::default()).is_err());
    }

    #[test]
    fn trace_is_monotone_and_matches_runs() {
        let r = annulus(0.02);
        let ctx = PoletskyContext::new(&r);
        let z = Complex64::new(0.0, 1.0);
        let opts = PoletskyOptions {
            seed: 11,
            ..Default::default()
        };
        let t = ctx.trace(z, &opts, &[0, 100, 600, 2000]).unwrap();
        assert!(t.windows(2).all(|w| w[1].1 <= w[0].1));
        let single = ctx.estimate(z, &PoletskyOptions { n_discs: 600, ..opts }).unwrap();
        assert_eq!(single.estimate, t[2].1);
        // upper bound for -0.5, and not far above it
        assert!(t[3].1 >= -0.5 - 0.02 && t[3].1 < -0.4, "{t:?}");
    }
}
