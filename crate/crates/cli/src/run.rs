//! Protocol runs: repeated measurements from a chosen initial state.

use serde::Serialize;
use zsq_core::analytic::{ProtocolParams, SqueezedTarget};
use zsq_core::protocol::{run_from, InitialState, TraceRow};

use crate::error::{CliError, Result};
use crate::output::fmt_real;

pub const CSV_HEADER: &str = "N,step_prob,cum_prob,fidelity,purity";

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub params: ProtocolParams<f64>,
    pub initial: InitialState<f64>,
    pub n_steps: usize,
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub params: ProtocolParams<f64>,
    pub initial: InitialState<f64>,
    pub dim: usize,
    pub target: Option<SqueezedTarget<f64>>,
    pub rows: Vec<TraceRow<f64>>,
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    if cfg.n_steps == 0 {
        return Err(CliError::Usage("--n-steps must be at least 1".into()));
    }
    if let InitialState::Coherent(a) = cfg.initial {
        if !(a.norm() <= 20.0) {
            return Err(CliError::Usage(format!(
                "coherent amplitude |alpha| = {} is outside the supported range 0..=20",
                a.norm()
            )));
        }
    }
    if let InitialState::Thermal(n) = cfg.initial {
        if !(n <= 50.0) {
            return Err(CliError::Usage(format!(
                "thermal occupation {n} is outside the supported range 0..=50"
            )));
        }
    }
    let trace = run_from(&cfg.params, &cfg.initial, cfg.n_steps, cfg.dim)?;
    Ok(RunOutput {
        params: cfg.params,
        initial: cfg.initial,
        dim: trace.dim,
        target: trace.target,
        rows: trace.rows,
    })
}

impl RunOutput {
    /// One row per `N = 0 ..= n_steps`; fidelity is empty at degenerate parameters.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out += &format!(
                "{},{},{},{},{}\n",
                r.n,
                fmt_real(r.step_prob),
                fmt_real(r.cum_prob),
                r.fidelity.map(fmt_real).unwrap_or_default(),
                fmt_real(r.purity)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes") + "\n"
    }
}
