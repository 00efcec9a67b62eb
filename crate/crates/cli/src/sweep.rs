//! Grid sweeps of the distillation rate and the squeezing of the target.

use rayon::prelude::*;
use serde::Serialize;
use zsq_core::analytic::{resolve_branch, ProtocolParams};
use zsq_core::Error;

use crate::error::{CliError, Result};
use crate::output::fmt_real;
use crate::values::{Axis, AxisSpec, Quantity};

pub const CSV_HEADER: &str = "tau_bar,g_bar,dp_bar,rate,tanh_r,status";

/// Swept axes plus fixed values for the others.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axes: Vec<AxisSpec>,
    pub fixed: (f64, f64, f64),
}

impl SweepGrid {
    pub fn new(axes: Vec<AxisSpec>, fixed: (f64, f64, f64)) -> Result<Self> {
        if axes.is_empty() {
            return Err(CliError::Usage(
                "sweep needs at least one --grid AXIS=MIN:MAX:COUNT".into(),
            ));
        }
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].iter().any(|b| b.axis == a.axis) {
                return Err(CliError::Usage(format!(
                    "axis {} given twice",
                    a.axis.name()
                )));
            }
        }
        Ok(Self { axes, fixed })
    }

    fn values(&self, axis: Axis) -> Vec<f64> {
        match self.axes.iter().find(|a| a.axis == axis) {
            Some(a) => a.values(),
            None => vec![match axis {
                Axis::TauBar => self.fixed.0,
                Axis::GBar => self.fixed.1,
                Axis::DpBar => self.fixed.2,
            }],
        }
    }

    /// Points in row-major order over `tau_bar`, `g_bar`, `dp_bar` (last fastest).
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let (ts, gs, ds) = (
            self.values(Axis::TauBar),
            self.values(Axis::GBar),
            self.values(Axis::DpBar),
        );
        let mut out = Vec::with_capacity(ts.len() * gs.len() * ds.len());
        for &t in &ts {
            for &g in &gs {
                for &d in &ds {
                    out.push((t, g, d));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Degenerate,
    Invalid,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate => "degenerate",
            Status::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau_bar: f64,
    pub g_bar: f64,
    pub dp_bar: f64,
    pub rate: Option<f64>,
    pub tanh_r: Option<f64>,
    pub status: Status,
}

pub fn evaluate_point((t, g, d): (f64, f64, f64), quantity: Quantity) -> SweepRow {
    let mut row = SweepRow {
        tau_bar: t,
        g_bar: g,
        dp_bar: d,
        rate: None,
        tanh_r: None,
        status: Status::Ok,
    };
    let branch = ProtocolParams::new(t, g, d).and_then(|p| resolve_branch(&p));
    match branch {
        Ok(b) => {
            if quantity.rate() {
                row.rate = Some(-b.lambda.norm().ln());
            }
            if quantity.tanh_r() {
                row.tanh_r = Some(b.zeta.norm());
            }
        }
        Err(Error::NoDistillation { .. }) => row.status = Status::Degenerate,
        Err(_) => row.status = Status::Invalid,
    }
    row
}

/// Evaluates every grid point on a pool of at most `jobs` threads; rows come
/// back in grid order.
pub fn run_sweep(grid: &SweepGrid, quantity: Quantity, jobs: usize) -> Result<Vec<SweepRow>> {
    let points = grid.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .map(|&p| evaluate_point(p, quantity))
            .collect()
    }))
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let cell = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out += CSV_HEADER;
    out.push('\n');
    for r in rows {
        out += &format!(
            "{},{},{},{},{},{}\n",
            fmt_real(r.tau_bar),
            fmt_real(r.g_bar),
            fmt_real(r.dp_bar),
            cell(r.rate),
            cell(r.tanh_r),
            r.status.as_str()
        );
    }
    out
}

pub fn to_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn axis(s: &str) -> AxisSpec {
        AxisSpec::parse(s).unwrap()
    }

    #[test]
    fn row_major_order() {
        let g = SweepGrid::new(
            vec![axis("g_bar=0:1:2"), axis("tau_bar=1:2:3")],
            (9.0, 9.0, 0.4),
        )
        .unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], (1.0, 0.0, 0.4));
        assert_eq!(pts[1], (1.0, 1.0, 0.4));
        assert_eq!(pts[2], (1.5, 0.0, 0.4));
    }

    #[test]
    fn grid_validation() {
        assert!(SweepGrid::new(vec![], (1.0, 1.0, 1.0)).is_err());
        assert!(
            SweepGrid::new(vec![axis("g=0:1:2"), axis("g_bar=0:2:3")], (1.0, 1.0, 1.0)).is_err()
        );
    }

    #[test]
    fn degenerate_and_invalid_points_are_reported() {
        assert_eq!(
            evaluate_point((PI, 1.0, 1.0), Quantity::Both).status,
            Status::Degenerate
        );
        assert_eq!(
            evaluate_point((1.0, 0.0, 1.0), Quantity::Both).status,
            Status::Degenerate
        );
        assert_eq!(
            evaluate_point((0.0, 1.0, 1.0), Quantity::Both).status,
            Status::Invalid
        );
        let ok = evaluate_point((0.9 * PI, 1.0, 0.4), Quantity::Rate);
        assert!(ok.rate.is_some() && ok.tanh_r.is_none());
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            evaluate_point((0.9 * PI, 1.0, 0.4), Quantity::Both),
            evaluate_point((PI, 1.0, 0.4), Quantity::Both),
        ];
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(lines[2].ends_with(",,,degenerate"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn pool_size_does_not_change_output() {
        let g = SweepGrid::new(
            vec![axis("tau_bar=0.1:2pi:40"), axis("g_bar=0:2:7")],
            (0.0, 0.0, 0.4),
        )
        .unwrap();
        let a = to_csv(&run_sweep(&g, Quantity::Both, 1).unwrap());
        let b = to_csv(&run_sweep(&g, Quantity::Both, 4).unwrap());
        assert_eq!(a, b);
    }
}
