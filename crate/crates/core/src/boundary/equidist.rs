use serde::{Deserialize, Serialize};

use super::BoundaryCloud;
use crate::green::{weighted_moments, DiscreteMeasure, Moment};

pub const DEFAULT_MAX_ORDER: u32 = 4;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentDeviation {
    pub j: u32,
    pub k: u32,
    pub cloud: num_complex::Complex64,
    pub measure: num_complex::Complex64,
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquidistributionReport {
    pub depth: usize,
    pub points: usize,
    pub max_order: u32,
    pub moments: Vec<MomentDeviation>,
    pub max_deviation: f64,
}

/// Compares `E[y^j conj(y)^k]`, `1 <= j + k <= max_order`, of the equally
/// weighted cloud with the same moments of `mu`.
pub fn equidistribution_report(cloud: &BoundaryCloud, mu: &DiscreteMeasure, max_order: u32) -> EquidistributionReport {
    let cm = cloud_moments(cloud, max_order);
    let mm = mu.moments(max_order);
    let moments: Vec<MomentDeviation> = cm
        .iter()
        .zip(&mm)
        .map(|(a, b)| MomentDeviation {
            j: a.j,
            k: a.k,
            cloud: a.value,
            measure: b.value,
            deviation: (a.value - b.value).norm(),
        })
        .collect();
    let max_deviation = moments.iter().map(|m| m.deviation).fold(0.0, f64::max);
    EquidistributionReport {
        depth: cloud.depth,
        points: cloud.len(),
        max_order,
        moments,
        max_deviation,
    }
}

pub fn cloud_moments(cloud: &BoundaryCloud, max_order: u32) -> Vec<Moment> {
    weighted_moments(cloud.points().iter().map(|&y| (y, 1.0)), max_order)
}
