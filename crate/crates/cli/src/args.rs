//! Command-line grammar. Every parsed subcommand serializes back into the
//! `config` block of its JSON output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ultragas::exactnum::parse_rational;

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "ultragas", version, about = "Exact partition functions of the one-dimensional p-adic log gas")]
pub struct Cli {
    /// Worker threads for Monte Carlo sampling.
    #[arg(long, global = true, env = "ULTRAMETRIC_GAS_THREADS")]
    pub threads: Option<usize>,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Canonical partition function Z(N, o) as a rational function of u = q^-beta.
    Zcan(ZcanArgs),
    /// Grand canonical series, its identities and occupancy distribution.
    Zgc(ZgcArgs),
    /// Multi-species partition function.
    Zmulti(ZmultiArgs),
    /// Probability of a cylinder event.
    Cylprob(CylprobArgs),
    /// Compare an exact value with a Monte Carlo estimate.
    #[command(name = "mc-verify")]
    McVerify(McVerifyArgs),
    /// Run the acceptance suite.
    Acceptance(AcceptanceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zcan(_) => "zcan",
            Command::Zgc(_) => "zgc",
            Command::Zmulti(_) => "zmulti",
            Command::Cylprob(_) => "cylprob",
            Command::McVerify(_) => "mc-verify",
            Command::Acceptance(_) => "acceptance",
        }
    }
}

/// Validates a rational or decimal argument but keeps the text as typed, so
/// the echoed config matches the command line.
fn rational_text(s: &str) -> Result<String, String> {
    parse_rational(s).map(|_| s.trim().to_string()).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZcanArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: usize,
    /// Inverse temperature, rational ("1/2") or decimal.
    #[arg(long, value_parser = rational_text)]
    pub beta: Option<String>,
    /// Also report P(|Vandermonde| = q^-k) for k <= K.
    #[arg(long, value_name = "K")]
    pub dist: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GcCheck {
    Gcz,
    Funceq,
    Thm4,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZgcArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub dmax: usize,
    #[arg(long, value_enum)]
    pub check: Option<GcCheck>,
    /// Ball level for the series and for the level-wise product identity.
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    /// Fugacity at which to evaluate the series.
    #[arg(long, value_parser = rational_text, requires = "beta")]
    pub t: Option<String>,
    #[arg(long, value_parser = rational_text)]
    pub beta: Option<String>,
    /// Occupancy distribution up to NMAX particles.
    #[arg(long, value_name = "NMAX", requires = "t")]
    pub pmf: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZmultiArgs {
    #[arg(long)]
    pub q: u64,
    /// Distinct positive charges, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub charges: Vec<u64>,
    /// Particles of each species, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub counts: Vec<usize>,
    #[arg(long, value_parser = rational_text)]
    pub beta: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CylprobArgs {
    #[arg(long)]
    pub q: u64,
    /// Ball=count pairs, e.g. "5:1:1=6,5:2:2.3=4".
    #[arg(long)]
    pub balls: String,
    /// Canonical ensemble with N particles.
    #[arg(long, conflicts_with = "t", required_unless_present = "t")]
    pub n: Option<usize>,
    /// Grand canonical ensemble at fugacity T.
    #[arg(long, value_parser = rational_text)]
    pub t: Option<String>,
    #[arg(long, value_parser = rational_text)]
    pub beta: String,
    /// Truncation tolerance in the grand canonical ensemble.
    #[arg(long, value_parser = rational_text, default_value = "1/1000000000000")]
    pub tol: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McVerifyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = rational_text)]
    pub beta: String,
    /// Estimate the probability of this event instead of Z.
    #[arg(long)]
    pub balls: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Digits per sampled point.
    #[arg(long, default_value_t = 30)]
    pub precision: usize,
    /// Agreement threshold in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Exact,
    Mc,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AcceptanceArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub only: Suite,
    /// Run only these criteria (comma separated numbers).
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u32>,
    /// Seed for randomized criteria.
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    /// Corrupt one canonical table entry (q = 3, N = 5) before the
    /// quadratic identity check.
    #[arg(long, hide = true)]
    pub inject_perturbation: bool,
}
