use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A complex polynomial stored with ascending coefficients `a_0, a_1, ..., a_d`.
///
/// The leading coefficient is always nonzero. Dynamical operations (escape
/// radius, orbits, Green functions) require degree at least two; use
/// [`Polynomial::dynamical`] to enforce that at construction time.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming zero leading coefficients. The zero
    /// polynomial is rejected.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        while coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial suitable for iteration: degree at least two.
    pub fn dynamical(coeffs: Vec<Complex64>) -> Result<Self> {
        let p = Self::new(coeffs)?;
        if p.degree() < 2 {
            return Err(Error::InvalidPolynomial(format!(
                "degree {} < 2 cannot be iterated",
                p.degree()
            )));
        }
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `z^d + c`, the unicritical family.
    pub fn unicritical(d: usize, c: Complex64) -> Self {
        assert!(d >= 1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
        coeffs[0] = c;
        coeffs[d] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// Polynomial with the given roots and unit leading coefficient.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = self.coeffs[self.degree()];
        for c in self.coeffs[..self.degree()].iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    #[inline]
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = self.coeffs[self.degree()];
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs[..self.degree()].iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Formal derivative. The derivative of a constant is rejected since the
    /// zero polynomial is not representable.
    pub fn derivative(&self) -> Result<Polynomial> {
        if self.degree() == 0 {
            return Err(Error::InvalidPolynomial(
                "derivative of a constant is the zero polynomial".into(),
            ));
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k + 1) as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// `f(z) - w`, used to pull points back under the map.
    pub fn minus_constant(&self, w: Complex64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= w;
        Polynomial { coeffs }
    }

    /// `max(1, max_k |a_k|)`, the scale used for residual tolerances.
    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max)
    }

    /// Certified escape radius `max(1, (1 + sum_{k<d} |a_k|) / |a_d|)`.
    ///
    /// For `|z| > R` the lower-order terms cannot cancel the leading one, and
    /// `|f(z)| > |z|^{d-1} >= |z|`.
    pub fn escape_radius(&self) -> f64 {
        let d = self.degree();
        let tail: f64 = self.coeffs[..d].iter().map(|c| c.norm()).sum();
        ((1.0 + tail) / self.leading().norm()).max(1.0)
    }

    /// Expansion factor `q > 1` with `|f(z)| >= q |z|` whenever `|z| >= r > R`.
    pub fn expansion_factor(&self, r: f64) -> f64 {
        let d = self.degree();
        let tail: f64 = self.coeffs[..d].iter().map(|c| c.norm()).sum();
        // |f(z)| >= |z|^{d-1} (|a_d| |z| - tail) for |z| >= 1
        r.powi(d as i32 - 2) * (self.leading().norm() * r - tail)
    }

    /// Taylor coefficients of `f(x + t)` in `t`.
    pub fn taylor_shift(&self, x: Complex64) -> Vec<Complex64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += x * next;
            }
        }
        c
    }

    /// True when `x` is a totally invariant point: `f(z) - x = a_d (z - x)^d`.
    /// Pullbacks of such a point never leave it.
    pub fn is_exceptional_point(&self, x: Complex64) -> bool {
        let shifted = self.taylor_shift(x);
        let d = self.degree();
        let scale = self.coefficient_scale() * (1.0 + x.norm()).powi(d as i32);
        let tol = 1e-12 * scale;
        (shifted[0] - x).norm() <= tol && shifted[1..d].iter().all(|c| c.norm() <= tol)
    }
}

impl fmt::Display for Polynomial {
    /// Ascending `re,im` pairs separated by spaces; round-trips through `FromStr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{},{}", c.re, c.im)?;
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for token in s.split_whitespace() {
            let (re, im) = token
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("coefficient `{token}` is not `re,im`")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("coefficient `{token}`: {e}")))
            };
            coeffs.push(Complex64::new(parse(re)?, parse(im)?));
        }
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Polynomial::new(coeffs)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
