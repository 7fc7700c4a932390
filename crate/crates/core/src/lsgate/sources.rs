use num_complex::Complex64;

use crate::dyncore::{EscapeParams, Polynomial};
use crate::green::{green_estimate, DEFAULT_SERIES_TERMS};
use crate::grid::{FieldKind, GreenField};

/// A Green function evaluated in log form, so values far below double range
/// still compare correctly. `-inf` means the point lies in the compact.
pub trait GreenSource: Sync {
    fn ln_green(&self, z: Complex64) -> f64;

    fn green(&self, z: Complex64) -> f64 {
        self.ln_green(z).exp()
    }
}

/// Green function of the filled Julia set of `poly`.
#[derive(Clone, Debug)]
pub struct JuliaGreen {
    pub poly: Polynomial,
    pub params: EscapeParams,
    pub series_terms: usize,
}

impl JuliaGreen {
    pub fn new(poly: &Polynomial) -> Self {
        JuliaGreen {
            poly: poly.clone(),
            params: EscapeParams::for_poly(poly),
            series_terms: DEFAULT_SERIES_TERMS,
        }
    }

    pub fn with_params(poly: &Polynomial, params: EscapeParams, series_terms: usize) -> Self {
        JuliaGreen {
            poly: poly.clone(),
            params,
            series_terms,
        }
    }
}

impl GreenSource for JuliaGreen {
    fn ln_green(&self, z: Complex64) -> f64 {
        green_estimate(&self.poly, z, &self.params, self.series_terms).ln_value
    }
}

/// Nearest-cell lookup into a sampled field. Relative fields enter as
/// `scale * (v + 1)`, the shape they take in `G_A = a (G_{A,U_a} + 1)`.
/// Points off the grid give NaN, which never satisfies a comparison.
pub struct FieldGreen<'a> {
    pub field: &'a GreenField,
    pub scale: f64,
}

impl<'a> FieldGreen<'a> {
    pub fn new(field: &'a GreenField) -> Self {
        FieldGreen { field, scale: 1.0 }
    }

    pub fn scaled(field: &'a GreenField, scale: f64) -> Self {
        FieldGreen { field, scale }
    }
}

impl GreenSource for FieldGreen<'_> {
    fn ln_green(&self, z: Complex64) -> f64 {
        match self.field.sample(z) {
            None => f64::NAN,
            Some(v) => match self.field.kind {
                FieldKind::Absolute => v.ln(),
                FieldKind::Relative => (self.scale * (v + 1.0)).ln(),
            },
        }
    }
}

/// `factor * G`; with `factor < 1` this is the injected fault of the
/// slow-growth negative control.
pub struct ScaledGreen<'a, S: GreenSource> {
    pub inner: &'a S,
    pub factor: f64,
}

impl<S: GreenSource> GreenSource for ScaledGreen<'_, S> {
    fn ln_green(&self, z: Complex64) -> f64 {
        self.inner.ln_green(z) + self.factor.ln()
    }
}
