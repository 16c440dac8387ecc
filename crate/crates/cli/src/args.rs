use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use littlewood::exact::num::parse_decimal;
use littlewood::exact::RealSpec;
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Parser, Debug)]
#[command(
    name = "lf",
    version,
    about = "Certified search for small values of x(ax - y)(bx - z)"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat key = value file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Continued fraction, convergents and error records of one number.
    Cf(CfArgs),
    /// Staged witness search over a range of indices (JSON lines).
    Witness(WitnessArgs),
    /// Threshold b_c(eta) for a list of eta (CSV).
    BcTable(BcArgs),
    /// Metallic pairs with their denominator factorizations (JSON lines).
    PairScan(PairScanArgs),
    /// Running minimum of n ||n a|| ||n b|| (CSV and plot data).
    Liminf(LiminfArgs),
    /// Cartan bound and sublevel-set checks on random cubics.
    CartanCheck(CartanArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct NumberSel {
    /// Metallic mean [b; b, b, ...].
    #[arg(long, value_name = "B")]
    pub metallic: Option<u64>,
    /// Square root of a positive integer.
    #[arg(long, value_name = "N")]
    pub sqrt: Option<u64>,
    /// Decimal or p/q literal; a trailing "..." marks it as truncated.
    #[arg(long, value_name = "X")]
    pub literal: Option<String>,
    /// Any number in the real-spec grammar (sqrt2, metallic7, surd(1,5,2), ...).
    #[arg(long, value_name = "SPEC")]
    pub real: Option<RealSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
pub struct CfArgs {
    #[command(flatten)]
    pub number: NumberSel,
    /// Number of partial quotients.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Also certify the error records at even indices.
    #[arg(long)]
    pub records: bool,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Also report the empirical minimum of q ||q x|| over q <= Q.
    #[arg(long, value_name = "Q", value_parser = clap::value_parser!(u64).range(1..))]
    pub estimate: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct PairSel {
    /// Metallic pair: alpha = [a; a, ...], beta = [b; b, ...].
    #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with_all = ["alpha", "beta"])]
    pub metallic_pair: Option<Vec<u64>>,
    #[arg(long, requires = "beta")]
    pub alpha: Option<RealSpec>,
    #[arg(long, requires = "alpha")]
    pub beta: Option<RealSpec>,
}

impl PairSel {
    pub fn resolve(&self) -> Result<(RealSpec, RealSpec), String> {
        match (&self.metallic_pair, &self.alpha, &self.beta) {
            (Some(v), _, _) => Ok((RealSpec::metallic(v[0]), RealSpec::metallic(v[1]))),
            (None, Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err("give --metallic-pair A B or both --alpha and --beta".into()),
        }
    }
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub pair: PairSel,
    #[arg(long, value_parser = parse_positive)]
    pub eps: BigRational,
    #[arg(long, default_value = "0", value_parser = parse_eta)]
    pub eta: BigRational,
    /// Inclusive index range, `a..b` or a single index.
    #[arg(long, value_parser = parse_range)]
    pub n: NRange,
    /// Override for the exponent of the search bound.
    #[arg(long, value_parser = parse_positive)]
    pub delta: Option<BigRational>,
    /// Most multiples tried per interval.
    #[arg(long, default_value_t = littlewood::pipeline::MULTIPLE_CAP)]
    pub cap: u64,
    /// Append each certificate to this JSON-lines file.
    #[arg(long, value_name = "FILE")]
    pub log: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BcArgs {
    /// Comma-separated values of eta.
    #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.1,0.25", value_parser = parse_eta)]
    pub eta: Vec<BigRational>,
    /// Bracket width for each threshold.
    #[arg(long, default_value = "1/1000000000", value_parser = parse_positive)]
    pub tol: BigRational,
}

#[derive(Args, Debug)]
pub struct PairScanArgs {
    #[arg(long, value_parser = parse_eta)]
    pub eta: BigRational,
    #[arg(long)]
    pub bmax: u64,
    #[arg(long, value_parser = parse_range, default_value = "1..5")]
    pub n: NRange,
    /// Write the reports here instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub jsonl: Option<PathBuf>,
    /// CSV summary (a, b, n, cond1, cond2, eta_min, gpf_a, gpf_b).
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Pollard-Brent iterations per cofactor.
    #[arg(long, default_value_t = 1 << 21)]
    pub rho_iterations: u64,
}

#[derive(Args, Debug)]
pub struct LiminfArgs {
    #[command(flatten)]
    pub pair: PairSel,
    #[arg(long = "q", value_parser = clap::value_parser!(u64).range(1..))]
    pub q_max: u64,
    /// CSV output (n, term, prefix_min); standard output by default.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Two-column plot data (n, prefix_min).
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CartanArgs {
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "1/1000,1/10,1", value_parser = parse_positive)]
    pub eps: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NRange(pub RangeInclusive<usize>);

pub fn parse_range(s: &str) -> Result<NRange, String> {
    let bad = || format!("bad index range {s:?}; expected a..b or n");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b < a {
        return Err(bad());
    }
    Ok(NRange(a..=b))
}

pub fn parse_number(s: &str) -> Result<BigRational, String> {
    parse_decimal(s).map(|(v, _)| v).map_err(|e| e.to_string())
}

pub fn parse_positive(s: &str) -> Result<BigRational, String> {
    let v = parse_number(s)?;
    if v <= BigRational::from_integer(BigInt::from(0)) {
        return Err(format!("{s} must be positive"));
    }
    Ok(v)
}

pub fn parse_eta(s: &str) -> Result<BigRational, String> {
    let v = parse_number(s)?;
    let third = BigRational::new(1.into(), 3.into());
    if v < BigRational::from_integer(0.into()) || v >= third {
        return Err(format!("eta = {s} must lie in [0, 1/3)"));
    }
    Ok(v)
}

impl FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_range(s)
    }
}
