use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "contextsim",
    version,
    about = "Classical hidden-variable simulations of EPR correlations"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Random seed.
    #[arg(long, env = "CONTEXTSIM_SEED", default_value_t = 1, global = true)]
    pub seed: u64,

    /// Worker threads for Monte Carlo runs (results do not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Read and write angles in radians instead of degrees.
    #[arg(long, global = true)]
    pub radians: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Valuation table of both protocols at the canonical settings.
    Table1(Table1Args),
    /// Monte Carlo CHSH value of a protocol.
    Chsh(ChshArgs),
    /// Correlation curve over a grid of relative angles.
    Curve(CurveArgs),
    /// Facet inequalities of a correlation polytope.
    Facets(FacetsArgs),
    /// Adaptive correlation curve of a squeezed band.
    Squeeze(SqueezeArgs),
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Breaking points, one per line (blank lines and `#` comments skipped).
    #[arg(long, conflicts_with = "builtin_paper_rows")]
    pub x_file: Option<PathBuf>,

    /// Use the twenty reference breaking points (default without --x-file).
    #[arg(long)]
    pub builtin_paper_rows: bool,

    /// Compare signs and CHSH entries with the golden table; exit 3 on mismatch.
    #[arg(long)]
    pub check: bool,

    /// Golden table to compare against (defaults to the bundled one).
    #[arg(long, requires = "check")]
    pub golden: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Nonadaptive,
    Adaptive,
    /// Experimental: fresh breaking point per CHSH term.
    AdaptiveFresh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Aligned,
    HalfTurn,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolArg,

    /// α,α′,β,β′ (degrees unless --radians).
    #[arg(long, allow_hyphen_values = true, default_value = "0,90,45,-45")]
    pub settings: String,

    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Band orientation law.
    #[arg(long, value_enum, default_value_t = OrientationArg::Aligned)]
    pub orientation: OrientationArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    BandAdaptive,
    BandUniform,
    BandUniformProduct,
    Peres,
    Urn,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Explicit grid, comma separated; overrides --from/--to/--steps.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,

    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub from: f64,

    /// Defaults to 180 degrees (π with --radians).
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,

    /// Number of grid points.
    #[arg(long, default_value_t = 19)]
    pub steps: usize,

    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Raw,
    Product,
}

#[derive(Debug, Args)]
pub struct FacetsArgs {
    #[arg(long, value_enum)]
    pub coords: Coords,
}

#[derive(Debug, Args)]
pub struct SqueezeArgs {
    /// Horizontal semi-axis.
    #[arg(long, allow_hyphen_values = true)]
    pub minor: f64,

    /// Vertical semi-axis (the band's direction).
    #[arg(long, allow_hyphen_values = true)]
    pub major: f64,

    /// Number of fractions on [0, 1/2].
    #[arg(long, default_value_t = 33)]
    pub points: usize,
}
