//! Run configuration: a TOML file (or the header of a previous output) merged
//! with command-line flags, validated before any computation starts.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use noonamp_core::opa::{DEFAULT_LEAKAGE_BUDGET, MAX_CUTOFF};
use noonamp_core::AmplifierGeometry;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Prefix of the lines that echo the effective configuration in CSV output.
pub const ECHO_PREFIX: &str = "# config: ";

const MAX_SEED_PHOTONS: u32 = 20;
const MAX_ORDER: u32 = 12;
const MAX_GRID_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Collinear,
    Noncollinear,
}

impl From<Geometry> for AmplifierGeometry {
    fn from(g: Geometry) -> Self {
        match g {
            Geometry::Collinear => AmplifierGeometry::Collinear,
            Geometry::Noncollinear => AmplifierGeometry::Noncollinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Groups of comparisons run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Block {
    Seed,
    Collinear,
    ThreePhoton,
    Noncollinear,
    Loss,
    Asym,
    Ratio,
}

impl Block {
    pub const ALL: [Block; 7] = [
        Block::Seed,
        Block::Collinear,
        Block::ThreePhoton,
        Block::Noncollinear,
        Block::Loss,
        Block::Asym,
        Block::Ratio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Block::Seed => "seed",
            Block::Collinear => "collinear",
            Block::ThreePhoton => "three-photon",
            Block::Noncollinear => "noncollinear",
            Block::Loss => "loss",
            Block::Asym => "asym",
            Block::Ratio => "ratio",
        }
    }
}

/// Every key a config file may set. Subcommands read the keys they use.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    geometry: Option<Geometry>,
    seed_n: Option<u32>,
    phi: Option<f64>,
    gain: Option<Vec<f64>>,
    eta: Option<f64>,
    order: Option<Vec<u32>>,
    grid_points: Option<usize>,
    cutoff: Option<u16>,
    tolerance: Option<f64>,
    block: Option<Vec<Block>>,
    format: Option<Format>,
}

impl FileConfig {
    /// Reads a TOML file, or recovers the configuration echoed into a previous
    /// CSV or JSON output.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        let invalid = |e: &dyn std::fmt::Display| CliError::Validation(format!("{}: {e}", path.display()));
        if text.trim_start().starts_with('{') {
            let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| invalid(&e))?;
            let config = value
                .get_mut("config")
                .map(serde_json::Value::take)
                .ok_or_else(|| invalid(&"JSON input has no \"config\" object"))?;
            return serde_json::from_value(config).map_err(|e| invalid(&e));
        }
        let echoed: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix(ECHO_PREFIX)).collect();
        let source = if echoed.is_empty() {
            text.clone()
        } else {
            echoed.join("\n")
        };
        toml::from_str(&source).map_err(|e| invalid(&e))
    }
}

/// Where and how results are written.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; written atomically. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// TOML config file, or a previous output whose echoed header is reused.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub geometry: Option<Geometry>,
    /// Seed photon number N; 0 injects vacuum.
    #[arg(long)]
    pub seed_n: Option<u32>,
    /// Seed phase φ in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Amplifier gain g (repeatable).
    #[arg(long)]
    pub gain: Vec<f64>,
    /// Transmittivity of the loss beam splitter on the signal mode.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Correlation order M (repeatable).
    #[arg(long)]
    pub order: Vec<u32>,
    /// Points of the uniform phase grid over [0, 2π).
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Per-mode photon cutoff (default: chosen from the gain).
    #[arg(long)]
    pub cutoff: Option<u16>,
    /// Largest truncation leakage accepted before failing.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// TOML config file, or a previous report whose echoed header is reused.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Gains at which finite-gain comparisons run (repeatable).
    #[arg(long)]
    pub gain: Vec<f64>,
    /// Transmittivity used by the loss comparisons.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Points of the phase grid used for simulated fringes.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Per-mode photon cutoff for simulated states (default: chosen from the gain).
    #[arg(long)]
    pub cutoff: Option<u16>,
    /// Replaces every comparison's default tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Restrict to these blocks (repeatable; default: all).
    #[arg(long, value_enum)]
    pub block: Vec<Block>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Effective `scan` configuration; serialized verbatim into the output header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub geometry: Geometry,
    pub seed_n: u32,
    pub phi: f64,
    pub gain: Vec<f64>,
    pub eta: f64,
    pub order: Vec<u32>,
    pub grid_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u16>,
    pub tolerance: f64,
    pub format: Format,
}

/// Effective `verify` configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub gain: Vec<f64>,
    pub eta: f64,
    pub grid_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub block: Vec<Block>,
    pub format: Format,
}

fn non_empty<T>(flag: Vec<T>, file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
    if !flag.is_empty() {
        flag
    } else {
        file.unwrap_or(default)
    }
}

fn load_file(path: &Option<PathBuf>) -> Result<FileConfig> {
    path.as_deref()
        .map(FileConfig::load)
        .transpose()
        .map(Option::unwrap_or_default)
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn check_gains(gains: &[f64], strictly_positive: bool) -> Result<()> {
    if gains.is_empty() {
        return Err(invalid("at least one gain is required".into()));
    }
    for &g in gains {
        if !g.is_finite() || g < 0.0 || (strictly_positive && g == 0.0) {
            let bound = if strictly_positive { "> 0" } else { ">= 0" };
            return Err(invalid(format!("gain {g} must be finite and {bound}")));
        }
    }
    Ok(())
}

fn check_common(eta: f64, grid_points: usize, cutoff: Option<u16>, tolerance: Option<f64>) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid(format!("eta {eta} must lie in [0, 1]")));
    }
    if grid_points == 0 || grid_points > MAX_GRID_POINTS {
        return Err(invalid(format!(
            "grid points {grid_points} must be in 1..={MAX_GRID_POINTS}"
        )));
    }
    if let Some(c) = cutoff {
        if c == 0 || c > MAX_CUTOFF {
            return Err(invalid(format!("cutoff {c} must be in 1..={MAX_CUTOFF}")));
        }
    }
    if let Some(t) = tolerance {
        if !t.is_finite() || t <= 0.0 {
            return Err(invalid(format!("tolerance {t} must be finite and positive")));
        }
    }
    Ok(())
}

impl ScanConfig {
    /// Flags win over the file; the file wins over defaults.
    pub fn resolve(args: &ScanArgs) -> Result<Self> {
        let file = load_file(&args.config)?;
        let config = Self {
            geometry: args.geometry.or(file.geometry).unwrap_or(Geometry::Collinear),
            seed_n: args.seed_n.or(file.seed_n).unwrap_or(2),
            phi: args.phi.or(file.phi).unwrap_or(0.0),
            gain: non_empty(args.gain.clone(), file.gain, vec![1.0]),
            eta: args.eta.or(file.eta).unwrap_or(1.0),
            order: non_empty(args.order.clone(), file.order, vec![2]),
            grid_points: args.grid_points.or(file.grid_points).unwrap_or(720),
            cutoff: args.cutoff.or(file.cutoff),
            tolerance: args.tolerance.or(file.tolerance).unwrap_or(DEFAULT_LEAKAGE_BUDGET),
            format: args.output.format.or(file.format).unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        check_gains(&self.gain, false)?;
        check_common(self.eta, self.grid_points, self.cutoff, Some(self.tolerance))?;
        if self.seed_n > MAX_SEED_PHOTONS {
            return Err(invalid(format!(
                "seed photon number {} exceeds {MAX_SEED_PHOTONS}",
                self.seed_n
            )));
        }
        if !self.phi.is_finite() {
            return Err(invalid("seed phase must be finite".into()));
        }
        if let Some(c) = self.cutoff {
            if (c as u32) < self.seed_n {
                return Err(invalid(format!(
                    "cutoff {c} is below the seed photon number {}",
                    self.seed_n
                )));
            }
        }
        if self.order.iter().any(|&m| m == 0 || m > MAX_ORDER) {
            return Err(invalid(format!("orders must be in 1..={MAX_ORDER}")));
        }
        Ok(())
    }
}

impl VerifyConfig {
    pub fn resolve(args: &VerifyArgs) -> Result<Self> {
        let file = load_file(&args.config)?;
        let mut block = non_empty(args.block.clone(), file.block, Block::ALL.to_vec());
        block.sort();
        block.dedup();
        let config = Self {
            gain: non_empty(args.gain.clone(), file.gain, vec![0.3, 1.0]),
            eta: args.eta.or(file.eta).unwrap_or(0.5),
            grid_points: args.grid_points.or(file.grid_points).unwrap_or(720),
            cutoff: args.cutoff.or(file.cutoff),
            tolerance: args.tolerance.or(file.tolerance),
            block,
            format: args.output.format.or(file.format).unwrap_or_default(),
        };
        check_gains(&config.gain, true)?;
        check_common(config.eta, config.grid_points, config.cutoff, config.tolerance)?;
        if config.cutoff.is_some_and(|c| c < 4) {
            return Err(invalid("verification seeds need a cutoff of at least 4".into()));
        }
        Ok(config)
    }
}

/// TOML rendering of an effective configuration, one echo line per key.
pub fn echo_lines<T: Serialize>(config: &T) -> Vec<String> {
    let text = toml::to_string(config).expect("configuration serializes to TOML");
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| format!("{ECHO_PREFIX}{l}"))
        .collect()
}

pub fn worker_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    if jobs == Some(0) {
        return Err(invalid("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}
