use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{critical_points, EscapeParams, Polynomial};
use crate::error::Result;

pub const TOL_CYCLE: f64 = 1e-9;
pub const MAX_PERIOD: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CriticalVerdict {
    AttractedToCycle {
        period: usize,
        multiplier: Complex64,
        /// A point of the detected cycle.
        cycle_point: Complex64,
        /// Iterate index at which the recurrence window closed.
        detected_at: usize,
    },
    Escaped {
        step: usize,
    },
    Undecided,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalOrbit {
    pub critical_point: Complex64,
    pub verdict: CriticalVerdict,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub orbits: Vec<CriticalOrbit>,
    /// True iff no critical verdict is undecided. Never inferred from a timeout.
    pub hyperbolic: bool,
}

impl HyperbolicityReport {
    /// Some critical orbit converges to an attracting cycle, so the filled
    /// Julia set has interior.
    pub fn has_attracting_cycle(&self) -> bool {
        self.orbits
            .iter()
            .any(|o| matches!(o.verdict, CriticalVerdict::AttractedToCycle { .. }))
    }
}

/// Follows every critical orbit and classifies it as escaping, attracted to
/// a cycle of period at most 64, or undecided after `N` steps.
pub fn hyperbolicity_certificate(poly: &Polynomial, params: &EscapeParams) -> Result<HyperbolicityReport> {
    let deriv = poly.derivative()?;
    let orbits: Vec<CriticalOrbit> = critical_points(poly)?
        .into_iter()
        .map(|cp| CriticalOrbit {
            critical_point: cp,
            verdict: classify(poly, &deriv, cp, params),
        })
        .collect();
    let hyperbolic = orbits.iter().all(|o| !matches!(o.verdict, CriticalVerdict::Undecided));
    Ok(HyperbolicityReport { orbits, hyperbolic })
}

fn classify(poly: &Polynomial, deriv: &Polynomial, start: Complex64, params: &EscapeParams) -> CriticalVerdict {
    let r2 = params.escape_radius * params.escape_radius;
    let window = 2 * MAX_PERIOD;
    // most recent iterate at the front
    let mut history: VecDeque<Complex64> = VecDeque::with_capacity(window + 1);
    let mut w = start;
    for n in 0..=params.max_iterations {
        if !(w.norm_sqr() <= r2) {
            return CriticalVerdict::Escaped { step: n };
        }
        history.push_front(w);
        history.truncate(window);
        for period in 1..=MAX_PERIOD {
            if history.len() < 2 * period {
                break;
            }
            if (history[0] - history[period]).norm() > TOL_CYCLE {
                continue;
            }
            let closes = (0..period).all(|k| (history[k] - history[k + period]).norm() <= TOL_CYCLE);
            if !closes {
                continue;
            }
            let multiplier = (0..period).fold(Complex64::new(1.0, 0.0), |m, k| m * deriv.eval(history[k]));
            if multiplier.norm() < 1.0 {
                return CriticalVerdict::AttractedToCycle {
                    period,
                    multiplier,
                    cycle_point: history[0],
                    detected_at: n,
                };
            }
        }
        w = poly.eval(w);
    }
    CriticalVerdict::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn superattracting_fixed_point() {
        let sq = Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let rep = hyperbolicity_certificate(&sq, &EscapeParams::for_poly(&sq)).unwrap();
        assert!(rep.hyperbolic);
        match &rep.orbits[0].verdict {
            CriticalVerdict::AttractedToCycle { period, multiplier, .. } => {
                assert_eq!(*period, 1);
                assert_eq!(*multiplier, c(0.0, 0.0));
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn superattracting_two_cycle() {
        let basilica = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let rep = hyperbolicity_certificate(&basilica, &EscapeParams::for_poly(&basilica)).unwrap();
        assert!(rep.hyperbolic);
        assert!(rep.has_attracting_cycle());
        match &rep.orbits[0].verdict {
            CriticalVerdict::AttractedToCycle { period, multiplier, .. } => {
                assert_eq!(*period, 2);
                assert!(multiplier.norm() < 1e-12);
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn escaping_critical_orbit_is_decided() {
        // c = 1 lies outside the Mandelbrot set: 0, 1, 2, 5 escapes past R = 2
        let p = Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let rep = hyperbolicity_certificate(&p, &EscapeParams::for_poly(&p)).unwrap();
        assert!(rep.hyperbolic);
        assert!(!rep.has_attracting_cycle());
        assert_eq!(rep.orbits[0].verdict, CriticalVerdict::Escaped { step: 3 });
    }

    #[test]
    fn near_parabolic_verdict_is_reproducible() {
        let p = Polynomial::new(vec![c(0.26, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        for n in [10, 100, 2000] {
            let params = EscapeParams::with_iterations(&p, n);
            let a = hyperbolicity_certificate(&p, &params).unwrap();
            let b = hyperbolicity_certificate(&p, &params).unwrap();
            assert_eq!(a.orbits[0].verdict, b.orbits[0].verdict);
            assert_eq!(a.hyperbolic, b.hyperbolic);
        }
        // with a short budget the slow passage through the parabolic gate is undecided
        let short = hyperbolicity_certificate(&p, &EscapeParams::with_iterations(&p, 10)).unwrap();
        assert!(!short.hyperbolic);
    }

    #[test]
    fn parabolic_map_is_never_claimed_hyperbolic() {
        let p = Polynomial::new(vec![c(0.25, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let rep = hyperbolicity_certificate(&p, &EscapeParams::for_poly(&p)).unwrap();
        assert!(!rep.hyperbolic);
        assert_eq!(rep.orbits[0].verdict, CriticalVerdict::Undecided);
    }
}
