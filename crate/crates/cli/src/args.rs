use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "rmt", version, about = "Random-matrix numerical lab: samplers, densities, Coulomb gas, resolvents, determinants")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for stochastic commands (required by them)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for the data-parallel core
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Flat `key = value` file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of Gaussian or Wishart draws, one row per eigenvalue
    Sample(SampleArgs),
    /// Exact finite-N density of a Gaussian ensemble
    Density(DensityArgs),
    /// Limiting laws: semicircle, Marčenko–Pastur, Wigner surmise
    Law(LawArgs),
    /// Nearest-neighbour spacings against their reference law
    Spacing(SpacingArgs),
    /// Metropolis simulation of the log-gas
    Coulomb(CoulombArgs),
    /// Equilibrium density from the singular integral equation
    Tricomi(TricomiArgs),
    /// Density of p·GOE + (1−p)·Wishart by free addition
    FreeAdd(FreeAddArgs),
    /// Probability that k of n GUE eigenvalues are positive
    Signprob(SignArgs),
    /// Squared eigenvector components against their exact law
    Eigvec(EigvecArgs),
    /// Run the invariant suite
    Check(CheckArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleEnsemble {
    Goe,
    Gue,
    Gse,
    Wishart,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaussEnsemble {
    Goe,
    Gue,
    Gse,
}

impl GaussEnsemble {
    pub fn beta(self) -> u8 {
        match self {
            GaussEnsemble::Goe => 1,
            GaussEnsemble::Gue => 2,
            GaussEnsemble::Gse => 4,
        }
    }
}

/// `lo:hi:steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        rmt_core::common::linspace(self.lo, self.hi, self.steps)
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected lo:hi:steps".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad lower bound `{}`", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad upper bound `{}`", parts[1]))?;
    let steps: usize = parts[2].trim().parse().map_err(|_| format!("bad step count `{}`", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("need finite lo < hi".into());
    }
    if steps < 2 {
        return Err("need at least 2 steps".into());
    }
    Ok(Grid { lo, hi, steps })
}

/// `N,T`.
pub fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,T")?;
    let n = a.trim().parse().map_err(|_| format!("bad N `{a}`"))?;
    let t = b.trim().parse().map_err(|_| format!("bad T `{b}`"))?;
    Ok((n, t))
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub ensemble: SampleEnsemble,
    #[arg(long)]
    pub n: usize,
    /// Columns of the Wishart factor
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub beta: Option<u8>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Divide by √(βN) (Gaussian) or βN (Wishart)
    #[arg(long)]
    pub rescale: bool,
    /// Also write a histogram/theory overlay CSV with a JSON sidecar
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub ensemble: GaussEnsemble,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Density of x/√(βN)
    #[arg(long)]
    pub rescale: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Semicircle,
    Mp,
    Surmise,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LawArgs {
    #[arg(value_enum)]
    pub law: Law,
    /// Ratio N/M for Marčenko–Pastur
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Surmise at unit mean spacing
    #[arg(long)]
    pub rescale: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingEnsemble {
    Goe,
    Poisson,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpacingArgs {
    /// `goe`: 2×2 GOE spacings; `poisson`: rescaled gaps of uniform variables
    #[arg(long, value_enum)]
    pub ensemble: SpacingEnsemble,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub count: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Potential {
    Gaussian,
    Wishart,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoulombArgs {
    #[arg(long, value_enum)]
    pub potential: Potential,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TricomiArgs {
    #[arg(long, value_enum)]
    pub potential: Potential,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FreeAddArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Monte Carlo comparison with N×N matrices and T draws
    #[arg(long, value_parser = parse_pair)]
    pub mc_check: Option<(usize, usize)>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SignArgs {
    #[arg(long)]
    pub n: usize,
    /// A single k; all k = 0..=n when absent
    #[arg(long)]
    pub k: Option<usize>,
    /// Print the double-double value to 30 digits
    #[arg(long)]
    pub exact: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VecEnsemble {
    Goe,
    Gue,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EigvecArgs {
    #[arg(long, value_enum)]
    pub ensemble: VecEnsemble,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub count: usize,
    /// Component index within each eigenvector
    #[arg(long, default_value_t = 0)]
    pub component: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Core,
    Sampling,
    ExactDensity,
    CoulombGas,
    ResolventFree,
    Determinants,
    Eigenvectors,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}
