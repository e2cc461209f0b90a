use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used by `dist sample` when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_220_518;

#[derive(Debug, Parser)]
#[command(
    name = "thetakit",
    version,
    about = "Jacobi theta functions and the probability laws built from them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate theta functions.
    Theta {
        #[command(subcommand)]
        op: ThetaOp,
    },
    /// Complete elliptic integrals and the modulus/lattice bijection.
    Elliptic {
        #[command(subcommand)]
        op: EllipticOp,
    },
    /// Discrete Gaussian theta_2 / theta_3 distributions.
    Dist(DistArgs),
    /// Brownian motion on [-1, 1] and Bessel(3) hitting times.
    Bm(BmArgs),
    /// The Kolmogorov distribution.
    Kolmogorov(KolmogorovArgs),
    /// Run named identity checks.
    Verify(VerifyArgs),
    /// Reproduce the singular-value tables.
    Tables(TablesArgs),
}

#[derive(Debug, Subcommand)]
pub enum ThetaOp {
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        kind: u8,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = ThetaMethod::Series)]
        method: ThetaMethod,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ThetaMethod {
    Series,
    Product,
}

#[derive(Debug, Subcommand)]
pub enum EllipticOp {
    /// K(k).
    K {
        #[arg(long)]
        k: f64,
    },
    /// E(k).
    E {
        #[arg(long)]
        k: f64,
    },
    /// The modulus k with K(k')/K(k) = c.
    ModulusFromC {
        #[arg(long)]
        c: f64,
    },
    /// The nome exp(-pi K(k')/K(k)).
    Nome {
        #[arg(long)]
        k: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistOp {
    Pmf,
    Mean,
    Var,
    Cumulant,
    Mgf,
    Entropy,
    Sample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Theta2,
    Theta3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Sampler {
    Exact,
    Bernoulli,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(value_enum)]
    pub op: DistOp,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub c: f64,
    /// var: elliptic|lambert|direct; cumulant: lambert|eisenstein.
    #[arg(long)]
    pub route: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Support point for pmf, number of draws for sample.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long)]
    pub order: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    #[arg(long, value_enum, default_value_t = Sampler::Exact)]
    pub sampler: Sampler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BmOp {
    Density,
    Green,
    ExitSurvival,
    ExitDensity,
    Bessel3Pdf,
    Bessel3Cdf,
    Bessel3Laplace,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ProcessArg {
    Reflected,
    Killed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Images,
    Spectral,
}

#[derive(Debug, Args)]
pub struct BmArgs {
    #[arg(value_enum)]
    pub op: BmOp,
    #[arg(long, value_enum, default_value_t = ProcessArg::Reflected)]
    pub process: ProcessArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Images)]
    pub method: MethodArg,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KolmogorovOp {
    Cdf,
    Pdf,
}

#[derive(Debug, Args)]
pub struct KolmogorovArgs {
    #[arg(value_enum)]
    pub op: KolmogorovOp,
    #[arg(long)]
    pub h: f64,
    /// cdf: series|product|elliptic; pdf: series|elliptic|signed-moment.
    #[arg(long, default_value = "series")]
    pub route: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity names, or `all`.
    #[arg(long, num_args = 1.., default_value = "all")]
    pub suite: Vec<String>,
    /// Overrides every per-identity tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub id: u8,
    /// Rows to emit (default: all of 1..10).
    #[arg(long, num_args = 1.., value_parser = clap::value_parser!(u32).range(1..=10))]
    pub r: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
