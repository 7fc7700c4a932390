use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsjulia_core::lsgate::DEFAULT_LADDER;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "lsjulia",
    version,
    about = "Green functions of filled Julia sets and Lojasiewicz-Siciak scans"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Green function on a grid: CSV, PGM and the invariance check.
    Green(GreenArgs),
    /// Julia set cloud by inverse iteration and its equidistribution report.
    Boundary(BoundaryArgs),
    /// Obstruction-set scan at level c, the c* ladder and its follow-up checks.
    Scan(ScanArgs),
    /// Exponent fit of ln G against ln dist over a distance band.
    Fit(FitArgs),
    /// Per-scale sup of ln G / ln dist over a refinement ladder.
    Obstruct(ObstructArgs),
    /// Relative Green function by relaxation and by analytic discs.
    Envelope(EnvelopeArgs),
    /// Compares G with a (G_{K,U_a} + 1) on U_a = {G < a}.
    Relation(RelationArgs),
    /// Corona U_a \ U_{a/d} and the constant delta for K_ell.
    Corona(CoronaArgs),
    /// Hyperbolicity certificate and the empirical expansion bound.
    Hyperbolic(HyperbolicArgs),
    /// Tangent-disks counterexample: cusp scans and ladders.
    Counterexample(CounterexampleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Green(_) => "green",
            Command::Boundary(_) => "boundary",
            Command::Scan(_) => "scan",
            Command::Fit(_) => "fit",
            Command::Obstruct(_) => "obstruct",
            Command::Envelope(_) => "envelope",
            Command::Relation(_) => "relation",
            Command::Corona(_) => "corona",
            Command::Hyperbolic(_) => "hyperbolic",
            Command::Counterexample(_) => "counterexample",
        }
    }
}

pub const SUBCOMMANDS: [&str; 10] = [
    "green",
    "boundary",
    "scan",
    "fit",
    "obstruct",
    "envelope",
    "relation",
    "corona",
    "hyperbolic",
    "counterexample",
];

/// Flags shared by every subcommand. Worker count, output directory and
/// config path do not affect results and are left out of the manifest.
#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Coefficients in ascending degree, each `re,im`, separated by spaces.
    #[arg(long, default_value = "0,0 0,0 1,0", allow_hyphen_values = true)]
    pub poly: String,
    /// `x0,y0,h,nx,ny`: lower-left corner, spacing and cell counts.
    #[arg(long, default_value = "-2,-2,0.01,400,400", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Guard band; defaults to `2 max(h, resolution)`.
    #[arg(long)]
    pub guard: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_LADDER)]
    pub ladder: Vec<f64>,
    #[arg(long, default_value_t = lsjulia_core::dyncore::DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: usize,
    /// `key = value` file with optional `[subcommand]` sections.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Filled Julia set of `--poly`, distance from an inverse-iteration cloud.
    Julia,
    /// Closed unit disk.
    Disk,
    /// Two closed unit disks tangent at the origin.
    TangentDisks,
}

#[derive(Args, Debug, Serialize)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = Model::Julia)]
    pub model: Model,
    /// Depth of the preimage tree behind the distance oracle.
    #[arg(long, default_value_t = 16)]
    pub depth: usize,
    /// Use this many random backward paths instead of the full tree.
    #[arg(long)]
    pub paths: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct BandArgs {
    #[arg(long, default_value_t = 0.05)]
    pub band_lo: f64,
    #[arg(long, default_value_t = 0.5)]
    pub band_hi: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct GreenArgs {
    #[command(flatten)]
    pub common: Common,
    /// Random points for the invariance check.
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long, default_value_t = lsjulia_core::boundary::DEFAULT_MAX_ORDER)]
    pub max_order: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Ball radii of the boundary check run at c* / 2.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05])]
    pub radii: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub ball_samples: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_points: usize,
    /// Iterates followed by the slow-growth check on flagged cells.
    #[arg(long, default_value_t = 8)]
    pub max_steps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub band: BandArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ObstructArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 3)]
    pub scales: usize,
    /// Band of the coarsest Julia scale; each further scale halves the band
    /// and the spacing. Model compacts use their built-in ladders.
    #[arg(long, default_value_t = 0.05)]
    pub band_lo: f64,
    #[arg(long, default_value_t = 0.2)]
    pub band_hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    /// A = disk(0, inner), U = disk(0, outer).
    Annulus,
    /// A = the two tangent unit disks, U = disk(0, outer).
    TangentDisks,
    /// A = K, U = {G < a} for `--poly`.
    Julia,
}

#[derive(Args, Debug, Serialize)]
pub struct RelaxArgs {
    #[arg(long, default_value_t = lsjulia_core::envelope::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = lsjulia_core::envelope::DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub relax: RelaxArgs,
    #[arg(long, value_enum, default_value_t = RegionKind::Annulus)]
    pub region: RegionKind,
    #[arg(long, default_value_t = 0.5)]
    pub inner: f64,
    #[arg(long, default_value_t = 2.0)]
    pub outer: f64,
    /// Level of `U = {G < a}` for the Julia region.
    #[arg(long, default_value_t = std::f64::consts::LN_2)]
    pub a: f64,
    /// Poletsky sample points, `re,im` separated by `;`.
    #[arg(long, default_value = "1,0;0,0.75;-1.2,0.9;0.3,-1.5", allow_hyphen_values = true)]
    pub at: String,
    #[arg(long, default_value_t = 20_000)]
    pub discs: usize,
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius_scale: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct RelationArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub relax: RelaxArgs,
    #[arg(long, default_value_t = std::f64::consts::LN_2)]
    pub a: f64,
    /// Pass threshold for the deviation; defaults to `5 h`.
    #[arg(long)]
    pub budget: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct CoronaArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub relax: RelaxArgs,
    #[arg(long, default_value_t = 2.0 * std::f64::consts::LN_2)]
    pub a: f64,
    #[arg(long, default_value_t = 0.2)]
    pub ell: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct HyperbolicArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    pub band_lo: f64,
    #[arg(long, default_value_t = 0.1)]
    pub band_hi: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CounterexampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Levels scanned in the cusp windows.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.3, 0.1])]
    pub levels: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    pub windows: usize,
    #[arg(long, default_value_t = 3)]
    pub scales: usize,
}
