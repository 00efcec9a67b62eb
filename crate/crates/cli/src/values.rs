//! Parsers for the small value languages used on the command line and in
//! config files.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use zsq_core::protocol::InitialState;

use crate::error::{CliError, Result};

/// A real number, optionally a multiple of pi: `0.4`, `pi`, `0.9pi`, `1.5*pi`, `-2e-3`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = |why: &str| CliError::parse("number", s, why);
    let (coef, times_pi) = match t.strip_suffix("pi") {
        Some(head) => {
            let head = head.trim_end().trim_end_matches('*').trim_end();
            match head {
                "" | "+" => ("1", true),
                "-" => ("-1", true),
                h => (h, true),
            }
        }
        None => (t, false),
    };
    let v: f64 = coef
        .parse()
        .map_err(|_| bad("expected a number or a multiple of pi"))?;
    let v = if times_pi { v * PI } else { v };
    if !v.is_finite() {
        return Err(bad("not finite"));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    TauBar,
    GBar,
    DpBar,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::TauBar, Axis::GBar, Axis::DpBar];

    pub fn name(self) -> &'static str {
        match self {
            Axis::TauBar => "tau_bar",
            Axis::GBar => "g_bar",
            Axis::DpBar => "dp_bar",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "tau_bar" | "tau" => Ok(Axis::TauBar),
            "g_bar" | "g" => Ok(Axis::GBar),
            "dp_bar" | "dp" => Ok(Axis::DpBar),
            _ => Err(CliError::parse(
                "axis",
                s,
                "expected tau_bar, g_bar or dp_bar",
            )),
        }
    }
}

/// `AXIS=MIN:MAX:COUNT`, linearly spaced with both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (axis, range) = s
            .split_once('=')
            .ok_or_else(|| CliError::parse("grid", s, "expected AXIS=MIN:MAX:COUNT"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(CliError::parse("grid", s, "expected AXIS=MIN:MAX:COUNT"));
        };
        let spec = AxisSpec {
            axis: Axis::parse(axis)?,
            min: parse_real(lo)?,
            max: parse_real(hi)?,
            count: n
                .trim()
                .parse()
                .map_err(|_| CliError::parse("grid", s, "COUNT must be an integer"))?,
        };
        if spec.count < 2 {
            return Err(CliError::parse("grid", s, "COUNT must be at least 2"));
        }
        if !(spec.min < spec.max) {
            return Err(CliError::parse("grid", s, "MIN must be below MAX"));
        }
        Ok(spec)
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

/// `vacuum`, `coherent:RE,IM` (or `coherent:RE`) or `thermal:NBAR`.
pub fn parse_initial(s: &str) -> Result<InitialState<f64>> {
    let t = s.trim();
    let bad = |why: &str| CliError::parse("initial state", s, why);
    if t == "vacuum" {
        return Ok(InitialState::Vacuum);
    }
    let (kind, arg) = t
        .split_once(':')
        .ok_or_else(|| bad("expected vacuum, coherent:RE,IM or thermal:NBAR"))?;
    match kind {
        "coherent" => {
            let mut it = arg.split(',');
            let re = parse_real(it.next().unwrap_or(""))?;
            let im = it.next().map(parse_real).transpose()?.unwrap_or(0.0);
            if it.next().is_some() {
                return Err(bad("coherent takes RE,IM"));
            }
            Ok(InitialState::Coherent(Complex64::new(re, im)))
        }
        "thermal" => {
            let nbar = parse_real(arg)?;
            if nbar < 0.0 {
                return Err(bad("NBAR must be non-negative"));
            }
            Ok(InitialState::Thermal(nbar))
        }
        _ => Err(bad("expected vacuum, coherent:RE,IM or thermal:NBAR")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Rate,
    TanhR,
    Both,
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "rate" => Ok(Quantity::Rate),
            "tanh_r" | "tanh-r" => Ok(Quantity::TanhR),
            "both" => Ok(Quantity::Both),
            _ => Err(CliError::parse(
                "quantity",
                s,
                "expected rate, tanh_r or both",
            )),
        }
    }

    pub fn rate(self) -> bool {
        matches!(self, Quantity::Rate | Quantity::Both)
    }

    pub fn tanh_r(self) -> bool {
        matches!(self, Quantity::TanhR | Quantity::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::parse("format", s, "expected csv or json")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_pi_multiples() {
        assert_eq!(parse_real("0.4").unwrap(), 0.4);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real("0.9pi").unwrap(), 0.9 * PI);
        assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_real(" 1e-3 ").unwrap(), 1e-3);
        assert!(parse_real("nan").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("").is_err());
    }

    #[test]
    fn axis_specs() {
        let a = AxisSpec::parse("tau_bar=0.5pi:pi:3").unwrap();
        assert_eq!(a.axis, Axis::TauBar);
        assert_eq!(a.values(), vec![0.5 * PI, 0.75 * PI, PI]);
        assert_eq!(
            AxisSpec::parse("g=0:2:5").unwrap().values(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0]
        );
        assert!(AxisSpec::parse("g_bar=0:2:1").is_err());
        assert!(AxisSpec::parse("g_bar=2:0:5").is_err());
        assert!(AxisSpec::parse("x=0:1:5").is_err());
        assert!(AxisSpec::parse("g_bar=0:1").is_err());
    }

    #[test]
    fn initial_states() {
        assert_eq!(parse_initial("vacuum").unwrap(), InitialState::Vacuum);
        assert_eq!(
            parse_initial("coherent:1,-0.5").unwrap(),
            InitialState::Coherent(Complex64::new(1.0, -0.5))
        );
        assert_eq!(
            parse_initial("coherent:2").unwrap(),
            InitialState::Coherent(Complex64::new(2.0, 0.0))
        );
        assert_eq!(
            parse_initial("thermal:0.5").unwrap(),
            InitialState::Thermal(0.5)
        );
        assert!(parse_initial("thermal:-1").is_err());
        assert!(parse_initial("fock:3").is_err());
        assert!(parse_initial("coherent:1,2,3").is_err());
    }

    #[test]
    fn enums() {
        assert_eq!(Quantity::parse("tanh_r").unwrap(), Quantity::TanhR);
        assert!(Quantity::Both.rate() && Quantity::Both.tanh_r());
        assert!(!Quantity::Rate.tanh_r());
        assert_eq!(Format::parse("json").unwrap(), Format::Json);
        assert!(Format::parse("xml").is_err());
    }
}
