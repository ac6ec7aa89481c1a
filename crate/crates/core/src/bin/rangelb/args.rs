use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Integer flag value; accepts scientific notation such as `1e6` as long as
/// it denotes an exact integer.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= 9_007_199_254_740_992.0) {
        return Err(format!("{s:?} is not an exact nonnegative integer"));
    }
    Ok(f as u64)
}

#[derive(Debug, Parser)]
#[command(
    name = "rangelb",
    version,
    about = "Hard instances and lower-bound preconditions for slab and annulus range searching"
)]
pub struct Cli {
    /// Worker threads for verification (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a hard instance and write it to an instance file.
    Gen(GenArgs),
    /// Check framework conditions on an instance file.
    Verify(VerifyArgs),
    /// Evaluate an area or geometric quantity.
    Area(AreaArgs),
    /// Run a seeded experiment.
    Experiment(ExperimentArgs),
    /// Evaluate a closed-form space bound.
    Bound(BoundArgs),
    /// Tabulate a quantity as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    SlabReport,
    SlabStab,
    AnnulusReport,
    AnnulusStab,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    #[arg(long, env = "RANGELB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: Kind,
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long = "qn")]
    pub q: f64,
    #[arg(long, default_value_t = 2)]
    pub delta: u32,
    /// Scale constant of the reporting slab family.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    /// Choose c2 so the stabbing slab family size is closest to n.
    #[arg(long)]
    pub tune_c2: bool,
    #[arg(long, default_value_t = 0.25)]
    pub slack: f64,
    #[arg(long = "cprime", default_value_t = 1.0)]
    pub c_prime: f64,
    /// Width override.
    #[arg(long)]
    pub w: Option<f64>,
    /// Per-degree scale overrides, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<f64>>,
    /// Grid side override for annulus families.
    #[arg(long)]
    pub t_side: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub log_base: f64,
    #[arg(long, value_parser = parse_count, default_value_t = 5_000_000)]
    pub max_family: u64,
    /// Points to sample (default: n for reporting kinds, none for stabbing).
    #[arg(long, value_parser = parse_count)]
    pub points: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Framework {
    Chazelle,
    Afshani,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub framework: Framework,
    #[arg(long)]
    pub inst: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub alpha: u32,
    /// Intersection cap c (default: ceil(3k·sqrt(log n)) for the instance).
    #[arg(long)]
    pub cap: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Sampled alpha-tuples when alpha > 2.
    #[arg(long, value_parser = parse_count, default_value_t = 0)]
    pub tuples: u64,
    /// Target output size / coverage (default: the instance's Q).
    #[arg(long = "qn")]
    pub q: Option<f64>,
    #[arg(long, value_parser = parse_count, default_value_t = 20_000_000)]
    pub max_pairs: u64,
    #[arg(long, default_value_t = 128)]
    pub probe_grid: u32,
    #[arg(long, default_value_t = 1000)]
    pub random_probes: u32,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub report: PathBuf,
    /// Record wall-clock time in the report (breaks byte-identical reruns).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Lens,
    Annulus,
    AnnulusInt,
    RingBound,
    CornerGap,
}

#[derive(Debug, Args)]
pub struct AreaArgs {
    pub shape: Shape,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Scale n for the ring bound (default r1).
    #[arg(long)]
    pub n: Option<f64>,
    /// Monte Carlo samples for a cross-check.
    #[arg(long, value_parser = parse_count)]
    pub mc: Option<u64>,
    #[command(flatten)]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    DerandInt,
    DerandRing,
    Lemma42,
    Calibrate,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    pub name: Experiment,
    #[arg(long)]
    pub inst: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub trials: u32,
    /// Points per trial (default: the instance's point count, else n).
    #[arg(long, value_parser = parse_count)]
    pub points: Option<u64>,
    /// Exponent k of the intersection threshold (default: Δ+1 for slabs, 3 for annuli).
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Region-area constant (derand-int) or area constant c (derand-ring).
    #[arg(long)]
    pub c: Option<f64>,
    /// Coverage threshold t (derand-ring; default the instance's Q).
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Subset-size constant in ceil(c·w²/√T).
    #[arg(long, default_value_t = 4.0)]
    pub ell_c: f64,
    #[arg(long, value_parser = parse_count, default_value_t = 1000)]
    pub subsets: u64,
    #[arg(long, value_parser = parse_count, default_value_t = 5_000_000)]
    pub max_pairs: u64,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long, value_parser = parse_count)]
    pub n: u64,
    #[arg(long = "qn")]
    pub q: f64,
    #[arg(long, default_value_t = 2)]
    pub delta: u32,
    #[arg(long, default_value_t = 1.0)]
    pub constant: f64,
    /// Exponent of the 2^(β·sqrt(log n)) divisor for reporting kinds.
    #[arg(long, default_value_t = 0.0)]
    pub subpoly_beta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub log_base: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    RingBound,
    Bound,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub table: Table,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long = "qn")]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub delta: u32,
    #[arg(long, value_parser = parse_count)]
    pub n_min: Option<u64>,
    #[arg(long, value_parser = parse_count)]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
}
