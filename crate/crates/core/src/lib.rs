//! Numerical potential theory for filled Julia sets.
//!
//! The crate computes Green functions of polynomial filled Julia sets and of
//! model planar compacts, samples Julia sets by inverse iteration, solves for
//! relative Green functions by relaxation and by analytic-disc Monte Carlo,
//! and scans for points where the lower bound `G >= c * dist(., K)^{1/c}`
//! fails.

pub mod boundary;
pub mod dyncore;
pub mod envelope;
mod error;
pub mod green;
pub mod grid;
pub mod io;
pub mod lsgate;
pub mod models;
pub mod parallel;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
