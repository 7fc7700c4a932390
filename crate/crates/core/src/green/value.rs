use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyncore::{EscapeParams, Polynomial};

pub const DEFAULT_SERIES_TERMS: usize = 8;

/// Extra iterations allowed after the orbit test has certified escape, for
/// orbits that creep just outside the escape radius before reaching `R_big`.
const CREEP_ALLOWANCE: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenEstimate {
    pub value: f64,
    /// `ln value`, finite even where `value` underflows; `-inf` on K.
    pub ln_value: f64,
    /// Bound on the neglected tail of the renormalisation series.
    pub truncation_bound: f64,
    /// Index of the iterate where renormalisation started, if the orbit escaped.
    pub escape_step: Option<usize>,
}

impl GreenEstimate {
    const INTERIOR: GreenEstimate = GreenEstimate {
        value: 0.0,
        ln_value: f64::NEG_INFINITY,
        truncation_bound: 0.0,
        escape_step: None,
    };
}

/// Green function of the filled Julia set with pole at infinity.
pub fn green_value(poly: &Polynomial, z: Complex64, params: &EscapeParams, series_terms: usize) -> f64 {
    green_estimate(poly, z, params, series_terms).value
}

/// Green function with its certified truncation bound.
///
/// Points whose orbit stays within the escape radius for `N` steps get
/// exactly zero. Otherwise the orbit is followed to the first iterate `w_n`
/// beyond `R_big` and
///
/// ```text
/// G(z) = ( ln|w_n| + sum_{j=0}^{T} ln|f(w_{n+j}) / w_{n+j}^d| / d^{j+1} ) / d^n
/// ```
///
/// is evaluated in log-modulus form, so the iterates never overflow. The
/// remaining terms converge to `ln|a_d| / d^{j+1}`; their limit is added in
/// closed form and the deviation from it is bounded by
/// `-ln(1 - C e^{-L})`, with `C = sum_{k<d} |a_k| / |a_d|` and `L` the log
/// modulus of the first neglected iterate.
pub fn green_estimate(poly: &Polynomial, z: Complex64, params: &EscapeParams, series_terms: usize) -> GreenEstimate {
    let r2 = params.escape_radius * params.escape_radius;
    let big2 = params.big_radius * params.big_radius;
    let mut w = z;
    let mut prev = z;
    let mut escaped = false;
    let mut n = 0usize;
    loop {
        let m = w.norm_sqr();
        if !m.is_finite() {
            // jumped past double range from `prev`, which is already outside R
            w = prev;
            n -= 1;
            break;
        }
        if m > big2 {
            break;
        }
        if m > r2 {
            escaped = true;
        }
        if !escaped && n >= params.max_iterations {
            return GreenEstimate::INTERIOR;
        }
        if escaped && n >= params.max_iterations + CREEP_ALLOWANCE {
            break;
        }
        prev = w;
        w = poly.eval(w);
        n += 1;
    }
    if !escaped && w.norm_sqr() <= r2 {
        // only reachable when R_big == R and the orbit sits exactly on it
        return GreenEstimate::INTERIOR;
    }

    let d = poly.degree();
    let df = d as f64;
    let coeffs = poly.coeffs();
    let lead = poly.leading();
    let tail_ratio: f64 = coeffs[..d].iter().map(|c| c.norm()).sum::<f64>() / lead.norm();

    let mut log_mod = w.norm().ln();
    let mut dir = w / w.norm();
    let mut sum = log_mod;
    let mut weight = 1.0;
    for _ in 0..=series_terms {
        let r = reversed_horner(coeffs, dir.conj() * (-log_mod).exp());
        let lr = r.norm().ln();
        weight /= df;
        sum += lr * weight;
        log_mod = df * log_mod + lr;
        dir = dir.powu(d as u32) * (r / r.norm());
        dir /= dir.norm();
    }
    sum += lead.norm().ln() * weight / (df - 1.0);

    let x = tail_ratio * (-log_mod).exp();
    let tail_bound = if x < 1.0 {
        -(1.0 - x).ln() * weight / (df - 1.0)
    } else {
        f64::INFINITY
    };

    let ln_scale = n as f64 * df.ln();
    let ln_value = if sum > 0.0 {
        sum.ln() - ln_scale
    } else {
        f64::NEG_INFINITY
    };
    GreenEstimate {
        value: ln_value.exp(),
        ln_value,
        truncation_bound: (tail_bound.ln() - ln_scale).exp(),
        escape_step: Some(n),
    }
}

/// `f(w) / w^d` evaluated in `t = 1/w`: `a_d + a_{d-1} t + ... + a_0 t^d`.
#[inline]
fn reversed_horner(coeffs: &[Complex64], t: Complex64) -> Complex64 {
    let mut acc = coeffs[0];
    for c in coeffs[1..].iter() {
        acc = acc * t + c;
    }
    acc
}
