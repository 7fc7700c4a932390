//! Compacts with closed-form Green functions, used as references.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::DistanceOracle;
use crate::lsgate::GreenSource;

/// Closed disk `|z - center| <= radius`, with `G = ln+(|z - center| / radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskModel {
    pub center: Complex64,
    pub radius: f64,
}

impl DiskModel {
    pub fn new(center: Complex64, radius: f64) -> Self {
        DiskModel { center, radius }
    }

    pub fn unit() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 1.0)
    }
}

impl GreenSource for DiskModel {
    fn ln_green(&self, z: Complex64) -> f64 {
        let t = ((z - self.center).norm() - self.radius) / self.radius;
        if t <= 0.0 {
            f64::NEG_INFINITY
        } else {
            t.ln_1p().ln()
        }
    }
}

impl DistanceOracle for DiskModel {
    fn dist(&self, z: Complex64) -> f64 {
        ((z - self.center).norm() - self.radius).max(0.0)
    }

    fn resolution(&self) -> f64 {
        0.0
    }
}

/// The closed disks `D(1, 1)` and `D(-1, 1)`, touching at the origin.
///
/// `w = 1/z` maps the complement onto the strip `|Re w| < 1/2`, and
/// `q = exp(-i pi / z)` onto the unit disk with infinity going to `q = 1`, so
///
/// ```text
/// G(z) = ln |(1 + q) / (1 - q)| = 2 Re atanh(q)
/// ```
///
/// with logarithmic capacity `pi / 2`. Near the origin along the imaginary
/// axis `G ~ 2 exp(-pi / y)` while `dist ~ y^2 / 2`, so no inequality
/// `G >= c dist^{1/c}` survives there.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TangentDisks;

impl TangentDisks {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - 1.0).norm_sqr() <= 1.0 || (z + 1.0).norm_sqr() <= 1.0
    }

    pub fn capacity(&self) -> f64 {
        std::f64::consts::FRAC_PI_2
    }
}

impl GreenSource for TangentDisks {
    fn ln_green(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            return f64::NEG_INFINITY;
        }
        // G is symmetric under conjugation; |q| <= 1 in the upper half plane
        let z = if z.im < 0.0 { z.conj() } else { z };
        let r2 = z.norm_sqr();
        let ln_mod = -std::f64::consts::PI * z.im / r2;
        let arg = -std::f64::consts::PI * z.re / r2;
        if ln_mod < -18.0 {
            // atanh(q) = q (1 + O(q^2))
            return std::f64::consts::LN_2 + ln_mod + arg.cos().ln();
        }
        let q = Complex64::from_polar(ln_mod.exp(), arg);
        let one_minus = Complex64::new(1.0, 0.0) - q;
        (0.5 * (4.0 * q.re / one_minus.norm_sqr()).ln_1p()).ln()
    }
}

impl DistanceOracle for TangentDisks {
    fn dist(&self, z: Complex64) -> f64 {
        ((z - 1.0).norm().min((z + 1.0).norm()) - 1.0).max(0.0)
    }

    fn resolution(&self) -> f64 {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_model_values() {
        let d = DiskModel::new(c(1.0, 1.0), 0.5);
        assert!((d.green(c(2.0, 1.0)) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(d.green(c(1.2, 1.0)), 0.0);
        assert!((d.dist(c(1.0, 3.0)) - 1.5).abs() < 1e-15);
        // accurate just outside the circle
        let g = d.green(c(1.5 + 1e-13, 1.0));
        assert!((g / 2e-13 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn tangent_disks_vanish_on_the_circles() {
        let m = TangentDisks;
        for k in 1..40 {
            let t = k as f64 * 0.15;
            for centre in [1.0, -1.0] {
                let z = c(centre, 0.0) + Complex64::from_polar(1.0 + 1e-9, t);
                assert!(m.green(z) < 1e-7, "{z}: {}", m.green(z));
            }
        }
    }

    #[test]
    fn tangent_disks_are_harmonic() {
        let m = TangentDisks;
        let h = 1e-3;
        for z in [c(0.0, 0.7), c(2.5, 0.3), c(-1.0, 1.5), c(0.1, -0.4), c(3.0, -3.0)] {
            let lap =
                m.green(z + h) + m.green(z - h) + m.green(z + c(0.0, h)) + m.green(z - c(0.0, h)) - 4.0 * m.green(z);
            assert!(lap.abs() / (h * h) < 1e-4, "{z}: {}", lap / (h * h));
        }
    }

    #[test]
    fn tangent_disks_capacity() {
        // G(z) - ln|z| -> -ln(capacity)
        let m = TangentDisks;
        for z in [c(1e4, 0.0), c(0.0, -1e4), c(-7e3, 7e3)] {
            let rest = m.green(z) - z.norm().ln();
            assert!((rest + m.capacity().ln()).abs() < 1e-6, "{rest}");
        }
    }

    #[test]
    fn tangent_disks_cusp_asymptotics() {
        let m = TangentDisks;
        for y in [0.05, 0.02, 0.01] {
            let lg = m.ln_green(c(0.0, y));
            assert!((lg - (2f64.ln() - std::f64::consts::PI / y)).abs() < 1e-3, "{y}: {lg}");
            let d = m.dist(c(0.0, y));
            assert!((d / (y * y / 2.0) - 1.0).abs() < y);
        }
    }
}
