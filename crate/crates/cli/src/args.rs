//! Flag definitions. Every argument struct serializes into the run manifest.

use std::path::PathBuf;

use amalgam_core::exponents::{parse_rational, ConditionSet, Exponent, ExponentTuple, Field};
use amalgam_core::wiener::Normalization;
use amalgam_core::{GridSpec, WindowKind, WindowSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "amalgam",
    version,
    about = "Strichartz estimates in Wiener amalgam spaces: norms, kernels, exponent regions and checks",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lebesgue, amalgam and Sobolev norms of a datum.
    Norm(NormArgs),
    /// Evolves a datum under e^{itΔ}|∇|^{-σ}.
    Evolve(EvolveArgs),
    /// Amalgam norm of the kernel K_t over a log-spaced time range.
    KernelProfile(ProfileArgs),
    /// Kernel profile plus power-law fits against the predicted exponents.
    FitDecay(FitArgs),
    /// Scans the admissible region of a condition set.
    Region(RegionArgs),
    /// Checks one exponent tuple against a condition set.
    CheckTuple(CheckArgs),
    /// Strichartz ratio of a datum, optionally over a modulation sweep.
    Ratio(RatioArgs),
    /// Randomized property suite for the amalgam inequalities.
    Suite(SuiteArgs),
    /// One-dimensional fractional integration ratios under refinement.
    Hls(HlsArgs),
    /// Bilinear-form and duality identities on random space-time fields.
    Bilinear(BilinearArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// `key = value` file supplying any flag; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (AMALGAM_OUT takes precedence).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn rational(s: &str) -> Result<String, String> {
    parse_rational(s).map(|_| s.trim().to_string()).map_err(|e| e.to_string())
}

fn exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

fn condition_set(s: &str) -> Result<ConditionSet, String> {
    s.parse::<ConditionSet>().map_err(|e| e.to_string())
}

fn field(s: &str) -> Result<Field, String> {
    s.parse::<Field>().map_err(|e| e.to_string())
}

fn window_kind(s: &str) -> Result<WindowKind, String> {
    s.parse::<WindowKind>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    /// Spatial dimension.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Half side L of the periodic box [-L, L)^n.
    #[arg(long, default_value_t = 64.0)]
    pub half_length: f64,
    /// Points per axis (power of two).
    #[arg(long, default_value_t = 4096)]
    pub points: usize,
}

impl GridArgs {
    pub fn grid(&self) -> amalgam_core::Result<GridSpec> {
        GridSpec::new(self.n, self.half_length, self.points)
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WindowArgs {
    /// Window family: cube, gaussian or bump.
    #[arg(long, value_parser = window_kind, default_value = "cube")]
    pub window: WindowKind,
    /// Half side for cubes, standard deviation for gaussians, support radius for bumps.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Translation step of the window lattice.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
}

impl WindowArgs {
    pub fn spec(&self) -> amalgam_core::Result<WindowSpec> {
        let norm = match self.window {
            WindowKind::CubeIndicator => Normalization::UnitPartition,
            _ => Normalization::UnitL2,
        };
        WindowSpec::new(self.window, self.radius, self.step, norm)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DatumKind {
    MexicanHat,
    Gaussian,
    BandLimited,
    Random,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DatumArgs {
    /// Read the datum from a field container instead of generating it.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "mexican-hat")]
    pub datum: DatumKind,
    /// Width of the mexican hat or gaussian.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Frequency cutoff of the band-limited datum.
    #[arg(long, default_value_t = 4.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TupleArgs {
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub qt: Exponent,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub rt: Exponent,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub q: Exponent,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub r: Exponent,
}

impl TupleArgs {
    pub fn tuple(&self, n: u32, sigma: &str) -> amalgam_core::Result<ExponentTuple> {
        Ok(ExponentTuple::new(n, parse_rational(sigma)?, self.qt, self.rt, self.q, self.r))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NormArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub datum: DatumArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Local exponent.
    #[arg(long, value_parser = exponent, default_value = "2")]
    pub p: Exponent,
    /// Global exponent.
    #[arg(long, value_parser = exponent, default_value = "2")]
    pub q: Exponent,
    /// Sobolev order of the homogeneous norm.
    #[arg(long, value_parser = rational, default_value = "0")]
    pub sigma: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub datum: DatumArgs,
    #[arg(long, value_parser = rational, default_value = "0")]
    pub sigma: String,
    /// Comma-separated instants.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4")]
    pub times: Vec<f64>,
    /// Also write the space-time field as a binary container.
    #[arg(long)]
    pub save: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, value_parser = rational)]
    pub sigma: String,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub rt: Exponent,
    #[arg(long, value_parser = exponent, default_value = "inf")]
    pub r: Exponent,
    #[arg(long, default_value_t = 64.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 4096)]
    pub points: usize,
    /// Window family: cube, gaussian or bump.
    #[arg(long, value_parser = window_kind, default_value = "bump")]
    pub window: WindowKind,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[arg(long, default_value_t = 0.02)]
    pub t_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 24)]
    pub per_decade: usize,
    #[command(flatten)]
    pub common: Common,
}

impl ProfileArgs {
    pub fn window_spec(&self) -> amalgam_core::Result<WindowSpec> {
        WindowArgs {
            window: self.window,
            radius: self.radius,
            step: self.step,
        }
        .spec()
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Allowed deviation of each fitted slope from its prediction.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RegionArgs {
    #[arg(long, value_parser = condition_set)]
    pub set: ConditionSet,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, value_parser = rational, default_value = "0")]
    pub sigma: String,
    #[arg(long, value_parser = exponent)]
    pub qt: Option<Exponent>,
    #[arg(long, value_parser = exponent)]
    pub rt: Option<Exponent>,
    #[arg(long, value_parser = exponent)]
    pub q: Option<Exponent>,
    #[arg(long, value_parser = exponent)]
    pub r: Option<Exponent>,
    /// Up to two scanned fields (qt, rt, q, r), comma-separated.
    #[arg(long, value_delimiter = ',', value_parser = field)]
    pub free: Vec<Field>,
    /// Field solved from the set's defining equality.
    #[arg(long, value_parser = field)]
    pub solve: Option<Field>,
    /// Step of the reciprocal-coordinate mesh.
    #[arg(long, value_parser = rational, default_value = "1/64")]
    pub resolution: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_parser = condition_set)]
    pub set: ConditionSet,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, value_parser = rational, default_value = "0")]
    pub sigma: String,
    #[command(flatten)]
    pub tuple: TupleArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RatioArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub datum: DatumArgs,
    #[arg(long, value_parser = rational)]
    pub sigma: String,
    #[command(flatten)]
    pub tuple: TupleArgs,
    /// Modulate by e^{i2^j x} for j = 0..=j_max (requires n = 1).
    #[arg(long)]
    pub j_max: Option<u32>,
    /// Weak outer time norm.
    #[arg(long)]
    pub weak: bool,
    #[arg(long, default_value_t = 0.01)]
    pub t_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 16)]
    pub per_decade: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Number of random fields.
    #[arg(long, default_value_t = 500)]
    pub corpus: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HlsArgs {
    #[arg(long, default_value_t = 4.0 / 3.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 9)]
    pub seed: u64,
    /// Coarse lattice spacing; the refined run halves it.
    #[arg(long, default_value_t = 1.0 / 32.0)]
    pub spacing: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BilinearArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 8.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 128)]
    pub points: usize,
    #[arg(long, value_parser = rational, default_value = "3/10")]
    pub sigma: String,
    #[arg(long, value_delimiter = ',', default_value = "-3,-1.2,-0.4,0,0.3,0.9,2,4.5")]
    pub times: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub pairs: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for both identities.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(flatten)]
    pub common: Common,
}
