//! TOML configuration, one section per command. Every field has a default,
//! so an absent file or section runs the reference setup.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use fracspec_core::fracderiv::DEFAULT_LEVELS;
use fracspec_core::oracles::FunctionId;
use fracspec_core::CleaningPolicy;

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub fracdiff: FracdiffConfig,
    pub validate: ValidateConfig,
    pub solve: SolveConfig,
    pub cache: CacheConfig,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CleaningMode {
    Off,
    Absolute,
    #[default]
    Relative,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Cleaning {
    pub mode: CleaningMode,
    /// Defaults to machine epsilon.
    pub threshold: Option<f64>,
}

impl Cleaning {
    pub fn policy(&self) -> Result<CleaningPolicy> {
        let t = self.threshold.unwrap_or(f64::EPSILON);
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Config(format!("cleaning threshold must be >= 0, got {t}")));
        }
        Ok(match self.mode {
            CleaningMode::Off => CleaningPolicy::Off,
            CleaningMode::Absolute => CleaningPolicy::Absolute(t),
            CleaningMode::Relative => CleaningPolicy::RelativeToMax(t),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FracdiffConfig {
    /// Bundled test function; exclusive with `samples`.
    pub function: Option<String>,
    /// CSV with columns `x,v` at the physical nodes, in node order.
    pub samples: Option<PathBuf>,
    /// Explicit α values; overridden by `alpha_grid` or `--alpha-grid`.
    pub alphas: Vec<f64>,
    pub alpha_grid: Option<usize>,
    pub n: Option<usize>,
    pub l: Option<f64>,
    pub levels: Vec<u32>,
    pub cleaning: Cleaning,
}

impl Default for FracdiffConfig {
    fn default() -> Self {
        Self {
            function: None,
            samples: None,
            alphas: vec![0.5],
            alpha_grid: None,
            n: None,
            l: None,
            levels: DEFAULT_LEVELS.to_vec(),
            cleaning: Cleaning::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Single,
    Pairs,
    Triples,
    Higher,
    Regularity,
    V8,
}

impl TableKind {
    pub const ALL: [TableKind; 6] = [
        TableKind::Single,
        TableKind::Pairs,
        TableKind::Triples,
        TableKind::Higher,
        TableKind::Regularity,
        TableKind::V8,
    ];
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    pub tables: Vec<TableKind>,
    /// Defaults to 101 (1001 with `--full-scale`).
    pub alpha_points: Option<usize>,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { tables: TableKind::ALL.to_vec(), alpha_points: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveConfig {
    pub alpha: f64,
    pub tau: f64,
    pub n: usize,
    pub l: f64,
    pub dt: f64,
    pub t_end: f64,
    pub levels: Vec<u32>,
    /// Steps between snapshots; the final state is always written.
    pub stride: usize,
    /// Initial datum, a bundled function id.
    pub datum: String,
    pub dealias: bool,
    pub cleaning: Cleaning,
    /// Level whose rightmost crossing marks the front.
    pub front_level: f64,
    /// Also dump the final coefficients in the cache binary format.
    pub dump_coefficients: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0 / 3.0,
            tau: 1.0,
            n: 128,
            l: 20.0,
            dt: 0.01,
            t_end: 20.0,
            levels: DEFAULT_LEVELS.to_vec(),
            stride: 100,
            datum: FunctionId::TanhStep.name().to_string(),
            dealias: false,
            cleaning: Cleaning::default(),
            front_level: 0.5,
            dump_coefficients: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeySpec {
    pub alpha: f64,
    pub n: usize,
    pub levels: Vec<u32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CacheConfig {
    /// Operator store shared by all commands; unset means assemble in memory.
    pub dir: Option<PathBuf>,
    pub keys: Vec<KeySpec>,
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Config(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    Ok(())
}

pub fn check_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(CliError::Config(format!("N must be even and >= 4, got {n}")));
    }
    Ok(())
}

pub fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Config(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

pub fn check_levels(levels: &[u32]) -> Result<()> {
    let consecutive = levels.windows(2).all(|w| w[1] == w[0] + 1);
    if levels.is_empty() || levels[0] == 0 || !consecutive {
        return Err(CliError::Config(format!("levels must be consecutive and start at >= 1, got {levels:?}")));
    }
    Ok(())
}

pub fn function(name: &str) -> Result<FunctionId> {
    name.parse().map_err(|_| CliError::Config(format!("unknown test function '{name}'")))
}
