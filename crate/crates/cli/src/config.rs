//! Flat TOML config files and the flag > config > default merge.
//!
//! ```toml
//! tau_bar = "0.9pi"
//! g_bar = 1.0
//! dp_bar = 0.4
//! n_steps = 20
//! initial = "coherent:1,0"
//! grid = ["tau_bar=0.01:2pi:200", "g_bar=0:2:100"]
//! ```

use std::path::{Path, PathBuf};

use toml::{Table, Value};
use zsq_core::analytic::ProtocolParams;
use zsq_core::protocol::InitialState;

use crate::error::{CliError, Result};
use crate::values::{parse_initial, parse_real, AxisSpec, Format, Quantity};

pub const DEFAULT_TAU_BAR: f64 = 0.9 * std::f64::consts::PI;
pub const DEFAULT_G_BAR: f64 = 1.0;
pub const DEFAULT_DP_BAR: f64 = 0.4;
pub const DEFAULT_N_STEPS: usize = 20;
pub const DEFAULT_JOBS: usize = 8;

/// Values read from a config file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub tau_bar: Option<f64>,
    pub g_bar: Option<f64>,
    pub dp_bar: Option<f64>,
    pub dim: Option<usize>,
    pub n_steps: Option<usize>,
    pub initial: Option<InitialState<f64>>,
    pub grid: Vec<AxisSpec>,
    pub quantity: Option<Quantity>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

const KEYS: &[&str] = &[
    "tau_bar", "g_bar", "dp_bar", "dim", "n_steps", "initial", "grid", "quantity", "format", "out",
    "jobs",
];

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Usage(e.message().to_string()))?;
        if let Some(k) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown key {k:?}")));
        }
        let real = |k: &str| -> Result<Option<f64>> {
            match table.get(k) {
                None => Ok(None),
                Some(Value::Float(f)) => Ok(Some(*f)),
                Some(Value::Integer(i)) => Ok(Some(*i as f64)),
                Some(Value::String(s)) => parse_real(s).map(Some),
                Some(v) => Err(CliError::Usage(format!(
                    "{k}: expected a number, found {}",
                    v.type_str()
                ))),
            }
        };
        let count = |k: &str| -> Result<Option<usize>> {
            match table.get(k) {
                None => Ok(None),
                Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
                Some(v) => Err(CliError::Usage(format!(
                    "{k}: expected a non-negative integer, found {v}"
                ))),
            }
        };
        let string = |k: &str| -> Result<Option<&str>> {
            match table.get(k) {
                None => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.as_str())),
                Some(v) => Err(CliError::Usage(format!(
                    "{k}: expected a string, found {}",
                    v.type_str()
                ))),
            }
        };
        let grid = match table.get("grid") {
            None => Vec::new(),
            Some(Value::String(s)) => vec![AxisSpec::parse(s)?],
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => AxisSpec::parse(s),
                    other => Err(CliError::Usage(format!(
                        "grid: expected strings, found {}",
                        other.type_str()
                    ))),
                })
                .collect::<Result<_>>()?,
            Some(v) => {
                return Err(CliError::Usage(format!(
                    "grid: expected a string or array, found {}",
                    v.type_str()
                )))
            }
        };
        Ok(Self {
            tau_bar: real("tau_bar")?,
            g_bar: real("g_bar")?,
            dp_bar: real("dp_bar")?,
            dim: count("dim")?,
            n_steps: count("n_steps")?,
            initial: string("initial")?.map(parse_initial).transpose()?,
            grid,
            quantity: string("quantity")?.map(Quantity::parse).transpose()?,
            format: string("format")?.map(Format::parse).transpose()?,
            out: string("out")?.map(PathBuf::from),
            jobs: count("jobs")?,
        })
    }
}

/// Fully resolved settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub tau_bar: f64,
    pub g_bar: f64,
    pub dp_bar: f64,
    pub dim: Option<usize>,
    pub n_steps: usize,
    pub initial: InitialState<f64>,
    pub grid: Vec<AxisSpec>,
    pub quantity: Quantity,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl Settings {
    /// Flags (already in `FileConfig` shape) override the file, which overrides defaults.
    pub fn merge(flags: FileConfig, file: FileConfig) -> Self {
        Self {
            tau_bar: flags.tau_bar.or(file.tau_bar).unwrap_or(DEFAULT_TAU_BAR),
            g_bar: flags.g_bar.or(file.g_bar).unwrap_or(DEFAULT_G_BAR),
            dp_bar: flags.dp_bar.or(file.dp_bar).unwrap_or(DEFAULT_DP_BAR),
            dim: flags.dim.or(file.dim),
            n_steps: flags.n_steps.or(file.n_steps).unwrap_or(DEFAULT_N_STEPS),
            initial: flags
                .initial
                .or(file.initial)
                .unwrap_or(InitialState::Vacuum),
            grid: if flags.grid.is_empty() {
                file.grid
            } else {
                flags.grid
            },
            quantity: flags.quantity.or(file.quantity).unwrap_or(Quantity::Both),
            format: flags.format.or(file.format),
            out: flags.out.or(file.out),
            jobs: flags.jobs.or(file.jobs).unwrap_or(DEFAULT_JOBS).max(1),
        }
    }

    pub fn params(&self) -> Result<ProtocolParams<f64>> {
        Ok(ProtocolParams::new(self.tau_bar, self.g_bar, self.dp_bar)?)
    }
}
