use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rosen_core::algebra::GroupIndex;
use rosen_core::expansion::Alpha;

use crate::output::Failure;

pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_PRECISION: u32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "rosen",
    version,
    about = "alpha-Rosen continued fractions: expansions, natural extensions, statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Digits, convergents and error bounds of a point x.
    Expand(ExpandArgs),
    /// Check the ordering theorem, heights and mass for (q, alpha) exactly.
    Verify(CommonArgs),
    /// Rectangles of the natural extension domain.
    Domain(CommonArgs),
    /// Monte Carlo experiments along typical orbits.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Lenstra,
    Theta2d,
    Equidistribution,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Index q >= 3 of the Hecke group.
    #[arg(long)]
    pub q: u32,
    /// alpha as p/r, a decimal, 1/2, 1/lambda or rho/lambda.
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    /// Binary precision of printed decimals, at least 64.
    #[arg(long, env = "ROSEN_PRECISION")]
    pub precision: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the data to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub struct Resolved {
    pub q: GroupIndex,
    pub alpha: Alpha,
    pub bits: u32,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Resolved, Failure> {
        let q = GroupIndex::new(self.q)?;
        let alpha: Alpha = self.alpha.parse()?;
        let bits = self.precision.unwrap_or(DEFAULT_PRECISION);
        if bits < MIN_PRECISION {
            return Err(Failure::Usage(format!("precision must be at least {MIN_PRECISION} bits, got {bits}")));
        }
        Ok(Resolved { q, alpha, bits })
    }
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// The point: a decimal, p/r, or an expression in lambda such as -lambda/2.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Number of digits.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Orbit steps in total over all shards.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Thresholds c for lenstra: numbers, L or k/L with L the Lenstra constant.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Vec<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Histogram cells per axis for theta2d.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Subdivisions per rectangle side for equidistribution.
    #[arg(long, default_value_t = 1)]
    pub refine: usize,
}
