//! Command-line grammar and validated run configuration.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use polysieve::sieve::DEFAULT_BUDGET;
use polysieve::IntPolynomial;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "polysieve",
    version,
    about = "Numerical verification of the polynomial large sieve"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub output: Format,

    /// Cap on fraction-term products (and on N² kernel evaluations)
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    pub budget: u64,

    /// Report wall_ms as 0, making the output a pure function of the inputs
    #[arg(long, global = true)]
    pub no_wall_time: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root counts ρ(m) for 1 ≤ m ≤ Q
    Rho(RhoArgs),
    /// Σ ρ(m)/m against its Euler product and the log-power envelope
    Prop1(RhoArgs),
    /// Exact Farey kernel K(c)
    Kernel(KernelArgs),
    /// The large-sieve form against its envelope
    Sieve(IntervalArgs),
    /// Power sums modulo a prime and the lower-bound example
    Sharpness(SharpnessArgs),
    /// The sum over primitive Dirichlet characters
    Corollary(CorollaryArgs),
    /// The full verification suite
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    /// Coefficients, highest degree first, e.g. 1,0,1 for T²+1
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long = "Q")]
    pub q: u64,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long = "Q")]
    pub q: u64,
    /// Frequency c; alternatively give --poly, --i and --j for c = P(i) − P(j)
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["poly", "i", "j"])]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["i", "j"])]
    pub poly: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "poly")]
    pub i: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "poly")]
    pub j: Option<String>,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long = "Q")]
    pub q: u64,
    /// The interval is I = (M, M+N]
    #[arg(long = "M", default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long = "N")]
    pub n: u64,
    /// ones | random | file:PATH (CSV rows i,re,im)
    #[arg(long, default_value = "ones")]
    pub weights: WeightSpec,
    /// Seed for --weights random
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CorollaryArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    #[arg(long = "D")]
    pub d: u64,
    #[arg(long = "M", default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, default_value = "ones")]
    pub weights: WeightSpec,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub q: u64,
    /// Farey order for the lower-bound example (needs --N as well)
    #[arg(long = "Q", requires = "len")]
    pub q_max: Option<u64>,
    #[arg(long = "N", id = "len", requires = "q_max")]
    pub len: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Run only the listed checks (1–11)
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u32>,
}

/// Source of the weights `a_i` on `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Ones,
    Random,
    File(PathBuf),
}

impl FromStr for WeightSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ones" => Ok(Self::Ones),
            "random" => Ok(Self::Random),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(path.into())),
                _ => Err(format!("expected ones, random or file:PATH, got {s:?}")),
            },
        }
    }
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Ones => f.write_str("ones"),
            Self::Random => f.write_str("random"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

pub fn parse_integer(flag: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: {s:?} is not an integer")))
}

/// Parses `c₀,c₁,…,c_k`; the leading coefficient must be nonzero.
pub fn parse_polynomial(s: &str) -> Result<IntPolynomial, CliError> {
    let coeffs = s
        .split(',')
        .map(|c| parse_integer("poly", c))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs[0] == BigInt::from(0) {
        return Err(CliError::Usage(format!(
            "--poly {s}: leading coefficient must be nonzero"
        )));
    }
    IntPolynomial::new(coeffs).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn positive(flag: &str, v: u64) -> Result<u64, CliError> {
    if v == 0 {
        Err(CliError::Usage(format!("--{flag} must be >= 1")))
    } else {
        Ok(v)
    }
}
