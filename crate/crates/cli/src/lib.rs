//! Command-line front end for `zsq-core`: single-point reports, grid
//! sweeps, protocol runs, the oracle battery and gnuplot scripts.

// `!(x <= y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod point;
pub mod run;
pub mod sweep;
pub mod values;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zsq_core::analytic::ProtocolParams;
use zsq_core::oracle::{verify, verify_points, VerifyLevel};

use crate::config::{FileConfig, Settings};
use crate::error::{CliError, Result};
use crate::output::emit;
use crate::values::{parse_initial, parse_real, AxisSpec, Format, Quantity};

#[derive(Debug, Parser)]
#[command(
    name = "zsq",
    version,
    about = "Squeezed-state distillation by repeated measurement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Measurement period omega*tau; accepts multiples of pi such as 0.9pi
    #[arg(long, global = true, value_parser = parse_real)]
    pub tau_bar: Option<f64>,
    /// Dimensionless coupling
    #[arg(long, global = true, value_parser = parse_real)]
    pub g_bar: Option<f64>,
    /// Dimensionless momentum spread of the particle
    #[arg(long, global = true, value_parser = parse_real)]
    pub dp_bar: Option<f64>,
    /// Fock-space truncation (chosen automatically when omitted)
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Number of measurements in a run
    #[arg(long, global = true)]
    pub n_steps: Option<usize>,
    /// vacuum | coherent:RE,IM | thermal:NBAR
    #[arg(long, global = true, value_parser = parse_initial)]
    pub initial: Option<zsq_core::protocol::InitialState<f64>>,
    /// Swept axis, AXIS=MIN:MAX:COUNT (repeatable)
    #[arg(long, global = true, value_parser = AxisSpec::parse)]
    pub grid: Vec<AxisSpec>,
    /// rate | tanh_r | both
    #[arg(long, global = true, value_parser = Quantity::parse)]
    pub quantity: Option<Quantity>,
    /// csv | json
    #[arg(long, global = true, value_parser = Format::parse)]
    pub format: Option<Format>,
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and verification
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Flat TOML file with defaults for any of the flags above
    #[arg(long, global = true, env = "ZSQ_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form quantities at one parameter point
    Point,
    /// Rate and squeezing over a parameter grid
    Sweep,
    /// Simulate repeated measurements on a truncated Fock space
    Run,
    /// Run the independent oracle checks
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
    },
    /// Write a gnuplot script for a figure
    PlotScript {
        /// 1, 2, 3 or 4
        #[arg(long)]
        figure: String,
        /// CSV file the script reads
        #[arg(long)]
        data: String,
    },
}

impl CommonArgs {
    fn into_config(self) -> (FileConfig, Option<PathBuf>) {
        let cfg = FileConfig {
            tau_bar: self.tau_bar,
            g_bar: self.g_bar,
            dp_bar: self.dp_bar,
            dim: self.dim,
            n_steps: self.n_steps,
            initial: self.initial,
            grid: self.grid,
            quantity: self.quantity,
            format: self.format,
            out: self.out,
            jobs: self.jobs,
        };
        (cfg, self.config)
    }
}

pub fn resolve_settings(common: CommonArgs) -> Result<Settings> {
    let (flags, path) = common.into_config();
    let file = match path {
        Some(p) => FileConfig::load(&p)?,
        None => FileConfig::default(),
    };
    Ok(Settings::merge(flags, file))
}

/// Runs one parsed invocation. Output is written before an error is
/// returned, so a degenerate `point` still prints its diagnostics.
pub fn execute(cli: Cli) -> Result<()> {
    let s = resolve_settings(cli.common)?;
    let out = s.out.as_deref();
    match cli.command {
        Command::Point => {
            let (body, err) = point::cmd_point(&s.params()?, s.format);
            emit(&body, out)?;
            err.map_or(Ok(()), Err)
        }
        Command::Sweep => {
            let grid = sweep::SweepGrid::new(s.grid.clone(), (s.tau_bar, s.g_bar, s.dp_bar))?;
            let rows = sweep::run_sweep(&grid, s.quantity, s.jobs)?;
            let body = match s.format.unwrap_or(Format::Csv) {
                Format::Csv => sweep::to_csv(&rows),
                Format::Json => sweep::to_json(&rows),
            };
            emit(&body, out)
        }
        Command::Run => {
            let cfg = run::RunConfig {
                params: s.params()?,
                initial: s.initial,
                n_steps: s.n_steps,
                dim: s.dim,
            };
            let res = run::execute(&cfg)?;
            let body = match s.format.unwrap_or(Format::Csv) {
                Format::Csv => res.to_csv(),
                Format::Json => res.to_json(),
            };
            emit(&body, out)
        }
        Command::Verify { level } => {
            let report = if s.grid.is_empty() {
                verify(match level {
                    Level::Quick => VerifyLevel::Quick,
                    Level::Full => VerifyLevel::Full,
                })
            } else {
                let grid = sweep::SweepGrid::new(s.grid.clone(), (s.tau_bar, s.g_bar, s.dp_bar))?;
                let points: Vec<ProtocolParams<f64>> = grid
                    .points()
                    .into_iter()
                    .map(|(t, g, d)| ProtocolParams::new(t, g, d))
                    .collect::<zsq_core::Result<_>>()?;
                verify_points(&points)
            };
            emit(&report.to_text(), out)?;
            match report.first_failure() {
                Some(f) => Err(CliError::VerifyFailed(f.name.clone())),
                None => Ok(()),
            }
        }
        Command::PlotScript { figure, data } => {
            emit(&plot::script(plot::Figure::parse(&figure)?, &data), out)
        }
    }
}

/// Message for stderr, with a remediation hint where one exists.
pub fn describe(err: &CliError) -> String {
    match err {
        CliError::Core(zsq_core::Error::TailTooLarge { .. }) => {
            format!("error: {err}\nhint: pass a larger --dim")
        }
        _ => format!("error: {err}"),
    }
}
