use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BoundaryCloud;
use crate::dyncore::{in_filled_julia, EscapeParams, Polynomial};
use crate::parallel::substream;

/// Distance to a compact set, with the accuracy it can promise.
pub trait DistanceOracle: Sync {
    fn dist(&self, z: Complex64) -> f64;

    /// Values are within this much of the true distance.
    fn resolution(&self) -> f64;
}

/// `dist(., K)` for a filled Julia set: zero on points the orbit test keeps,
/// otherwise the distance to the nearest cloud point.
pub struct CloudDistance<'a> {
    pub poly: &'a Polynomial,
    pub params: EscapeParams,
    pub cloud: &'a BoundaryCloud,
}

impl<'a> CloudDistance<'a> {
    pub fn new(poly: &'a Polynomial, params: EscapeParams, cloud: &'a BoundaryCloud) -> Self {
        CloudDistance { poly, params, cloud }
    }

    /// Distance to the nearest cloud point, ignoring the orbit test.
    pub fn to_cloud(&self, z: Complex64) -> f64 {
        self.cloud.index().nearest(z).map_or(f64::INFINITY, |(_, d)| d)
    }
}

impl DistanceOracle for CloudDistance<'_> {
    fn dist(&self, z: Complex64) -> f64 {
        if in_filled_julia(self.poly, z, &self.params) {
            0.0
        } else {
            self.to_cloud(z)
        }
    }

    fn resolution(&self) -> f64 {
        self.cloud.resolution
    }
}

pub fn dist_to_k(z: Complex64, cloud: &BoundaryCloud, poly: &Polynomial, params: &EscapeParams) -> f64 {
    CloudDistance::new(poly, *params, cloud).dist(z)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityReport {
    pub radius: f64,
    pub samples_per_ball: usize,
    pub seed: u64,
    pub balls: usize,
    pub successes: usize,
    pub fraction: f64,
}

/// Fraction of cloud points whose `radius`-ball contains a point the orbit
/// test keeps, among `samples` uniform draws per ball.
pub fn interior_density_check(
    poly: &Polynomial,
    cloud: &BoundaryCloud,
    radius: f64,
    samples: usize,
    params: &EscapeParams,
    seed: u64,
) -> DensityReport {
    let hits: Vec<bool> = cloud
        .points()
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let mut rng = substream(seed, i as u64);
            (0..samples).any(|_| {
                let r = radius * rng.random::<f64>().sqrt();
                let t = rng.random_range(0.0..std::f64::consts::TAU);
                in_filled_julia(poly, x + Complex64::from_polar(r, t), params)
            })
        })
        .collect();
    let successes = hits.iter().filter(|&&h| h).count();
    DensityReport {
        radius,
        samples_per_ball: samples,
        seed,
        balls: hits.len(),
        successes,
        fraction: if hits.is_empty() {
            0.0
        } else {
            successes as f64 / hits.len() as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{default_base_point, preimage_tree, CloudMode};

    #[test]
    fn unit_disk_distances() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let p = EscapeParams::for_poly(&sq);
        let cloud = preimage_tree(&sq, Complex64::new(4.0, 0.0), 12, CloudMode::FullTree, 0).unwrap();
        let z = Complex64::new(2.0, 0.0);
        assert!((dist_to_k(z, &cloud, &sq, &p) - 1.0).abs() <= cloud.resolution);
        assert_eq!(dist_to_k(Complex64::new(0.5, 0.0), &cloud, &sq, &p), 0.0);
    }

    #[test]
    fn disk_balls_always_meet_the_interior() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let p = EscapeParams::for_poly(&sq);
        let cloud = preimage_tree(&sq, Complex64::new(4.0, 0.0), 8, CloudMode::FullTree, 0).unwrap();
        let rep = interior_density_check(&sq, &cloud, 0.05, 64, &p, 1);
        assert_eq!(rep.fraction, 1.0);
    }

    #[test]
    fn empty_interior_contrast() {
        // c = 1 lies outside the connectedness locus: K = J is a Cantor set
        let dust = Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let p = EscapeParams::for_poly(&dust);
        let cloud = preimage_tree(&dust, default_base_point(&dust), 8, CloudMode::FullTree, 0).unwrap();
        let rep = interior_density_check(&dust, &cloud, 0.05, 64, &p, 1);
        assert!(rep.fraction < 0.5, "{}", rep.fraction);
    }
}
