//! Command-line arguments. Every subcommand's arguments serialize into the
//! provenance block of its output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gasket::harmonic::DEFAULT_QUADRATURE_CAP;
use gasket::Dyadic;
use serde::{Serialize, Serializer};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "gasket", version, about = "Prefractal gaskets, Dirac spectra and convergence certificates")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a prefractal gasket (Euclidean or harmonic) as JSON, CSV or SVG.
    Gen(GenArgs),
    /// Certified Gromov-Hausdorff bounds for a range of levels.
    GhTable(GhTableArgs),
    /// Eigenvalue counting function of the curve Dirac operator.
    Spectrum(SpectrumArgs),
    /// Log-log fit of the counting function.
    Dimension(DimensionArgs),
    /// Optimal transport cost between two measures on a gasket level.
    Kantorovich(KantorovichArgs),
    /// Extent bound for the tunnel joining V_m and sampled SG_n.
    Extent(ExtentArgs),
    /// Reach of the covariant tunnel between H_n and the full Hilbert space.
    Covariant(CovariantArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::GhTable(_) => "gh-table",
            Command::Spectrum(_) => "spectrum",
            Command::Dimension(_) => "dimension",
            Command::Kantorovich(_) => "kantorovich",
            Command::Extent(_) => "extent",
            Command::Covariant(_) => "covariant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Sg,
    Harmonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Auto,
    Exact,
    Float,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = Geometry::Sg)]
    pub geometry: Geometry,
    #[arg(long)]
    pub level: u32,
    /// Quadrature tolerance for harmonic curve lengths.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Deepest quadrature refinement per curve.
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_CAP)]
    pub quadrature_cap: u32,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GhTableArgs {
    #[arg(long, default_value_t = 0)]
    pub n_min: u32,
    #[arg(long, default_value_t = 6)]
    pub n_max: u32,
    /// Level standing in for the limit gasket.
    #[arg(long, default_value_t = 9)]
    pub m: u32,
    /// Samples at parameters i/2^depth on each finest edge.
    #[arg(long, default_value_t = 1)]
    pub sample_depth: u32,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = Geometry::Sg)]
    pub geometry: Geometry,
    /// Finite level; the full gasket when absent (sg only).
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 40)]
    pub points: usize,
    /// Also report the partial zeta sum at this exponent.
    #[arg(long)]
    pub zeta_s: Option<f64>,
    /// Number of length classes (levels, for the full gasket) in the zeta sum.
    #[arg(long)]
    pub zeta_cap: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_CAP)]
    pub quadrature_cap: u32,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionArgs {
    #[arg(long, value_enum, default_value_t = Geometry::Sg)]
    pub geometry: Geometry,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, default_value_t = 10.0)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1e5)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = gasket::spectrum::DEFAULT_GRID_SIZE)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_CAP)]
    pub quadrature_cap: u32,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KantorovichArgs {
    #[arg(long, value_enum, default_value_t = Geometry::Sg)]
    pub geometry: Geometry,
    /// Gasket level whose vertex set carries the measures.
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Finite metric space JSON to use instead of a gasket level.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Source measure as "index:weight,…"; weights are p/q or decimals.
    #[arg(long)]
    pub mu: String,
    /// Target measure, same syntax.
    #[arg(long)]
    pub nu: String,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlphaArg {
    Auto,
    Value(Dyadic),
}

impl Serialize for AlphaArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AlphaArg::Auto => s.serialize_str("auto"),
            AlphaArg::Value(d) => s.serialize_str(&d.to_string()),
        }
    }
}

fn parse_alpha(s: &str) -> Result<AlphaArg, String> {
    if s == "auto" {
        return Ok(AlphaArg::Auto);
    }
    match Dyadic::parse(s) {
        Some(d) if d > Dyadic::ZERO => Ok(AlphaArg::Value(d)),
        Some(_) => Err("alpha must be positive".into()),
        None => Err(format!("expected auto or a dyadic such as 1/2^5, got {s:?}")),
    }
}

fn parse_dyadic(s: &str) -> Result<Dyadic, String> {
    Dyadic::parse(s).ok_or_else(|| format!("expected a dyadic such as 1/2^5, got {s:?}"))
}

fn serialize_opt_dyadic<S: Serializer>(d: &Option<Dyadic>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_str(&d.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtentArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    /// Cross-edge length: "auto" (ε/4) or a dyadic such as 1/2^6.
    #[arg(long, default_value = "auto", value_parser = parse_alpha)]
    pub alpha: AlphaArg,
    #[arg(long, default_value_t = 1)]
    pub sample_depth: u32,
    /// Fail unless both Hausdorff terms are at most this dyadic.
    #[arg(long, value_parser = parse_dyadic)]
    #[serde(serialize_with = "serialize_opt_dyadic")]
    pub epsilon_target: Option<Dyadic>,
    /// Random four-point mixtures transported as a spot check.
    #[arg(long, default_value_t = 16)]
    pub mixtures: usize,
    /// Include the per-point nearest-distance table in JSON output.
    #[arg(long)]
    pub dirac_table: bool,
}

#[derive(Args, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CovariantArgs {
    /// Truncation level; the smallest admissible level for ε when absent.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 201)]
    pub time_points: usize,
}
