use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("root finding did not converge after {sweeps} sweeps (max residual {max_residual:e})")]
    RootsNotConverged {
        sweeps: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("preimage computation failed at node {node}: {source}")]
    Preimage {
        node: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("relaxation did not converge after {sweeps} sweeps (last update {residual:e})")]
    RelaxationNotConverged { sweeps: usize, residual: f64 },

    #[error("discrete Laplacian mass {mass} differs from 1 by more than 5%")]
    MassDeviation { mass: f64 },

    #[error("gradient stencil point {0} lies in the filled Julia set")]
    StencilInside(Complex64),

    #[error("no valid analytic disc found at {0}")]
    NoValidDisc(Complex64),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Numerical non-convergence, as opposed to bad input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::RootsNotConverged { .. }
                | Error::RelaxationNotConverged { .. }
                | Error::MassDeviation { .. }
                | Error::Preimage { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Json(_))
    }
}
