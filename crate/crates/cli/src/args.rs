use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "covarfit",
    version,
    about = "Fit restricted AR/VAR models to a target autocovariance and synthesize series"
)]
pub struct Cli {
    /// More log output on stderr (-v info, -vv debug); RUST_LOG takes precedence.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a target autocovariance (or two-point covariance) table.
    Target(TargetArgs),
    /// Fit an AR or VAR model to a target table.
    Fit(FitArgs),
    /// Theoretical autocovariance of a fitted model.
    Autocov(AutocovArgs),
    /// One-sided spectrum of a model, a target table or the von Kármán model.
    Spectrum(SpectrumArgs),
    /// YW, Krenk and GA lag schemes compared for a range of N.
    Benchmark(BenchmarkArgs),
    /// Synthesize realizations and compare their ensemble autocovariance with theory.
    Synth(SynthArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TurbulenceKind {
    Vonkarman,
}

/// Accepts `p/q` or a decimal and returns the text unchanged once it parses.
pub fn parse_gamma(s: &str) -> Result<String, String> {
    gamma_value(s).map(|_| s.to_string())
}

pub fn gamma_value(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = if s.contains('/') {
        let r: Ratio<i64> = s.parse().map_err(|e| format!("bad ratio {s:?}: {e}"))?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))?
    };
    if value.is_finite() && value > 0.5 {
        Ok(value)
    } else {
        Err(format!("exponent must exceed 1/2, got {s}"))
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetArgs {
    #[arg(long, value_enum, default_value_t = TurbulenceKind::Vonkarman)]
    pub model: TurbulenceKind,
    /// Spectral exponent, as a ratio (`5/6`) or decimal.
    #[arg(long, default_value = "5/6", value_parser = parse_gamma)]
    pub gamma: String,
    /// Non-dimensional lag spacing Δr/L.
    #[arg(long, default_value_t = 0.1245)]
    pub dr: f64,
    /// Largest lag written.
    #[arg(long, default_value_t = 120)]
    pub lags: usize,
    /// Non-dimensional lateral separation; writes the two-point covariance table instead.
    #[arg(long, conflicts_with = "from_csv")]
    pub dy: Option<f64>,
    /// Import a `lag,value` table instead of building one.
    #[arg(long)]
    pub from_csv: Option<PathBuf>,
    #[arg(long, default_value = "target.csv")]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitArgs {
    /// Target table (`lag,value`, or `lag,i,j,value` with --var).
    #[arg(long)]
    pub target: PathBuf,
    /// Regression lags, e.g. `1,2,5`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub j: Vec<usize>,
    /// Autocovariance-equation lags; defaults to the regression lags.
    #[arg(long, value_delimiter = ',', conflicts_with = "nonlinear")]
    pub l: Vec<usize>,
    /// Match the target exactly at --match-lags instead of solving the linear system.
    #[arg(long, requires = "match_lags", conflicts_with = "var")]
    pub nonlinear: bool,
    /// Lags reproduced exactly by the non-linear fit, starting with 0.
    #[arg(long, value_delimiter = ',', requires = "nonlinear")]
    pub match_lags: Vec<usize>,
    /// Fit a VAR model to a covariance-matrix table.
    #[arg(long)]
    pub var: bool,
    /// Expected dimension of the VAR target.
    #[arg(long, requires = "var")]
    pub k: Option<usize>,
    /// Lag spacing of the target table.
    #[arg(long, default_value_t = 0.1245)]
    pub dr: f64,
    /// Largest lag in the report and of the MSE.
    #[arg(long = "M", alias = "m", default_value_t = 41)]
    pub m: usize,
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Report table; defaults to the model path with a `.report.csv` extension.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutocovMethodArg {
    Direct,
    Recursive,
    Companion,
    Vma,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutocovArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Largest lag computed.
    #[arg(long, default_value_t = 41)]
    pub n: usize,
    /// Defaults to `direct` for AR models and `companion` for VAR models.
    #[arg(long, value_enum)]
    pub method: Option<AutocovMethodArg>,
    /// VMA truncation order; chosen from the decay of the weights when omitted.
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, default_value = "autocov.csv")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    /// k_max = π/Δr
    #[default]
    Angular,
    /// k_max = 1/(2Δr)
    Cyclic,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumForm {
    /// Closed form from the AR coefficients.
    #[default]
    Coefficient,
    /// Cosine series of the theoretical autocovariance.
    Cosine,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["model", "target", "von_karman"]))]
pub struct SpectrumArgs {
    /// AR model JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Target table (`lag,value`).
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Analytic von Kármán spectrum, always in premultiplied form.
    #[arg(long)]
    pub von_karman: bool,
    #[arg(long, default_value = "5/6", value_parser = parse_gamma)]
    pub gamma: String,
    #[arg(long, default_value_t = 0.1245)]
    pub dr: f64,
    /// Number of wavenumbers in [0, k_max].
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t)]
    pub convention: ConventionArg,
    /// Write k·S(k) instead of S(k).
    #[arg(long)]
    pub premultiplied: bool,
    #[arg(long, value_enum, default_value_t)]
    pub form: SpectrumForm,
    /// Variance σ₀² the spectrum is normalized by.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    #[arg(long, default_value = "spectrum.csv")]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0)]
    pub delta0: usize,
    #[arg(long, default_value_t = 10)]
    pub delta1: usize,
    /// Overridden by the COVARFIT_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "M", alias = "m", default_value_t = 41)]
    pub m: usize,
    #[arg(long, default_value_t = 200)]
    pub population: usize,
    #[arg(long, default_value_t = 300)]
    pub generations: usize,
    #[arg(long, default_value_t = 64)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 0.8)]
    pub crossover: f64,
    #[arg(long, default_value_t = 0.1)]
    pub mutation: f64,
    #[arg(long, default_value_t = 2)]
    pub elitism: usize,
    #[arg(long, default_value_t = 3)]
    pub tournament: usize,
    #[arg(long, default_value = "benchmark.csv")]
    pub out: PathBuf,
    /// Per-generation JSON lines; defaults to the output path with a `.log.jsonl` extension.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BurnIn {
    Auto,
    Samples(usize),
}

pub fn parse_burn_in(s: &str) -> Result<BurnIn, String> {
    if s == "auto" {
        Ok(BurnIn::Auto)
    } else {
        s.parse()
            .map(BurnIn::Samples)
            .map_err(|_| format!("expected `auto` or a sample count, got {s:?}"))
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Bin,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub length: usize,
    #[arg(long, default_value_t = 100)]
    pub realizations: usize,
    /// `auto` (100 samples per unit of model order) or a sample count.
    #[arg(long, default_value = "auto", value_parser = parse_burn_in)]
    pub burn_in: BurnIn,
    /// Overridden by the COVARFIT_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Directory receiving one file per realization.
    #[arg(long, default_value = "synth")]
    pub out_dir: PathBuf,
    /// Largest lag of the ensemble report.
    #[arg(long, default_value_t = 41)]
    pub max_lag: usize,
    /// Ensemble report; defaults to `ensemble.csv` inside the output directory.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// Skip writing the realizations and only report the ensemble.
    #[arg(long)]
    pub no_series: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}
