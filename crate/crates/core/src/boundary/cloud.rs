use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NearestIndex;
use crate::dyncore::{roots, Polynomial};
use crate::error::{Error, Result};
use crate::parallel::substream;

/// Largest full tree, in points.
pub const MAX_TREE_POINTS: usize = 1 << 22;
pub const TOL_PULLBACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CloudMode {
    FullTree,
    RandomPaths { paths: usize },
}

/// Sidecar metadata of a cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudMeta {
    pub base_point: Complex64,
    pub depth: usize,
    #[serde(flatten)]
    pub mode: CloudMode,
    pub seed: u64,
    pub resolution: f64,
    pub points: usize,
    pub pullback_error: f64,
}

/// Iterated preimages of a base point, with a nearest-neighbour index.
#[derive(Clone, Debug)]
pub struct BoundaryCloud {
    pub base_point: Complex64,
    pub depth: usize,
    pub mode: CloudMode,
    pub seed: u64,
    /// Largest nearest-neighbour gap within the cloud.
    pub resolution: f64,
    /// Largest `|f^depth(y) - base_point|` over the cloud.
    pub pullback_error: f64,
    index: NearestIndex,
}

impl BoundaryCloud {
    /// Wraps an arbitrary point set, computing its resolution.
    pub fn from_points(
        points: Vec<Complex64>,
        base_point: Complex64,
        depth: usize,
        mode: CloudMode,
        seed: u64,
    ) -> Self {
        let probe = NearestIndex::build(points, 0.0);
        let resolution = max_gap(&probe);
        let index = if probe.bucket_side() >= resolution {
            probe
        } else {
            NearestIndex::build(probe.points().to_vec(), resolution)
        };
        BoundaryCloud {
            base_point,
            depth,
            mode,
            seed,
            resolution,
            pullback_error: 0.0,
            index,
        }
    }

    pub fn points(&self) -> &[Complex64] {
        self.index.points()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index(&self) -> &NearestIndex {
        &self.index
    }

    pub fn meta(&self) -> CloudMeta {
        CloudMeta {
            base_point: self.base_point,
            depth: self.depth,
            mode: self.mode,
            seed: self.seed,
            resolution: self.resolution,
            points: self.len(),
            pullback_error: self.pullback_error,
        }
    }
}

fn max_gap(index: &NearestIndex) -> f64 {
    (0..index.len())
        .into_par_iter()
        .map(|i| index.nearest_excluding(index.points()[i], i).map_or(0.0, |(_, d)| d))
        .reduce(|| 0.0, f64::max)
}

/// Default base point: on the real axis at 1.5 times the escape radius,
/// certified exterior and never exceptional.
pub fn default_base_point(poly: &Polynomial) -> Complex64 {
    Complex64::new(1.5 * poly.escape_radius(), 0.0)
}

/// Samples `J` by pulling `base_point` back `depth` times.
///
/// Full-tree mode keeps all `d^depth` preimages with multiplicity; random
/// paths follow `paths` independent backward orbits, each choosing a root
/// uniformly from its own substream of `seed`.
pub fn preimage_tree(
    poly: &Polynomial,
    base_point: Complex64,
    depth: usize,
    mode: CloudMode,
    seed: u64,
) -> Result<BoundaryCloud> {
    if depth < 1 {
        return Err(Error::Precondition("depth must be >= 1".into()));
    }
    if poly.is_exceptional_point(base_point) {
        return Err(Error::Precondition(format!(
            "base point {base_point} is totally invariant; pick another"
        )));
    }
    let d = poly.degree();
    let pull = |w: Complex64| {
        roots(&poly.minus_constant(w)).map_err(|e| Error::Preimage {
            node: w,
            source: Box::new(e),
        })
    };
    let points = match mode {
        CloudMode::FullTree => {
            let total = (d as f64).powi(depth as i32);
            if total > MAX_TREE_POINTS as f64 {
                return Err(Error::Precondition(format!(
                    "full tree of degree {d} at depth {depth} exceeds {MAX_TREE_POINTS} points"
                )));
            }
            let mut level = vec![base_point];
            for _ in 0..depth {
                let next: Vec<Vec<Complex64>> = level.par_iter().map(|&w| pull(w)).collect::<Result<_>>()?;
                level = next.into_iter().flatten().collect();
            }
            level
        }
        CloudMode::RandomPaths { paths } => {
            if paths == 0 {
                return Err(Error::Precondition("random-paths mode needs at least one path".into()));
            }
            (0..paths)
                .into_par_iter()
                .map(|i| {
                    let mut rng = substream(seed, i as u64);
                    let mut w = base_point;
                    for _ in 0..depth {
                        let rs = pull(w)?;
                        w = rs[rng.random_range(0..d)];
                    }
                    Ok(w)
                })
                .collect::<Result<_>>()?
        }
    };
    let pullback_error = pullback_deviation(poly, &points, base_point, depth);
    let mut cloud = BoundaryCloud::from_points(points, base_point, depth, mode, seed);
    cloud.pullback_error = pullback_error;
    Ok(cloud)
}

/// Largest `|f^depth(y) - base|` over `points`.
pub fn pullback_deviation(poly: &Polynomial, points: &[Complex64], base: Complex64, depth: usize) -> f64 {
    points
        .par_iter()
        .map(|&y| {
            let mut w = y;
            for _ in 0..depth {
                w = poly.eval(w);
            }
            (w - base).norm()
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn square() -> Polynomial {
        Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn closed_form_preimages_of_four() {
        let n = 6;
        let cloud = preimage_tree(&square(), Complex64::new(4.0, 0.0), n, CloudMode::FullTree, 0).unwrap();
        assert_eq!(cloud.len(), 1 << n);
        let modulus = 4f64.powf(1.0 / (1 << n) as f64);
        let mut args: Vec<f64> = cloud.points().iter().map(|p| p.arg().rem_euclid(TAU)).collect();
        for p in cloud.points() {
            assert!((p.norm() - modulus).abs() < 1e-12);
        }
        args.sort_by(f64::total_cmp);
        let gap = TAU / (1 << n) as f64;
        for w in args.windows(2) {
            assert!((w[1] - w[0] - gap).abs() < 1e-9);
        }
        assert!(cloud.pullback_error < TOL_PULLBACK);
    }

    #[test]
    fn preimages_of_julia_point_stay_on_circle() {
        let cloud = preimage_tree(&square(), Complex64::new(1.0, 0.0), 10, CloudMode::FullTree, 0).unwrap();
        assert!(cloud.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-9));
        // 1024 equally spaced points on the unit circle
        assert!((cloud.resolution - 2.0 * (TAU / 2048.0).sin()).abs() < 1e-9);
    }

    #[test]
    fn exceptional_base_point_is_refused() {
        assert!(matches!(
            preimage_tree(&square(), Complex64::new(0.0, 0.0), 3, CloudMode::FullTree, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn oversized_tree_is_refused() {
        assert!(matches!(
            preimage_tree(&square(), Complex64::new(4.0, 0.0), 23, CloudMode::FullTree, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn random_paths_are_reproducible() {
        let basilica = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let base = default_base_point(&basilica);
        let mode = CloudMode::RandomPaths { paths: 200 };
        let a = preimage_tree(&basilica, base, 12, mode, 42).unwrap();
        let b = preimage_tree(&basilica, base, 12, mode, 42).unwrap();
        let c = preimage_tree(&basilica, base, 12, mode, 43).unwrap();
        assert_eq!(a.points(), b.points());
        assert_ne!(a.points(), c.points());
        assert!(a.pullback_error < TOL_PULLBACK);
    }
}
