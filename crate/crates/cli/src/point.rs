use num_complex::Complex64;
use serde::Serialize;
use zsq_core::analytic::{
    compute_scalars, resolve_branch, spectrum_of, ProtocolParams, SqueezedTarget,
};

use crate::error::CliError;
use crate::output::fmt_real;
use crate::values::Format;

/// Number of eigenvalues listed by `point`.
pub const POINT_GAMMAS: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub tau_bar: f64,
    pub g_bar: f64,
    pub dp_bar: f64,
    pub status: &'static str,
    pub reason: Option<String>,
    pub beta: Complex64,
    pub m: Complex64,
    pub g: Complex64,
    pub c: f64,
    pub q: Complex64,
    pub lambda: Option<Complex64>,
    pub zeta: Option<Complex64>,
    pub gamma: Vec<Complex64>,
    pub rate: Option<f64>,
    pub r: Option<f64>,
    pub tanh_r: Option<f64>,
    pub phi: Option<f64>,
    pub mean_quanta: Option<f64>,
    pub quanta_variance: Option<f64>,
}

pub fn evaluate(params: &ProtocolParams<f64>) -> PointReport {
    let s = compute_scalars(params);
    let q = Complex64::new(params.tau_bar.cos(), 0.0) + Complex64::i() * s.g * params.tau_bar.sin();
    let mut rep = PointReport {
        tau_bar: params.tau_bar,
        g_bar: params.g_bar,
        dp_bar: params.dp_bar,
        status: "ok",
        reason: None,
        beta: s.beta,
        m: s.m,
        g: s.g,
        c: s.c,
        q,
        lambda: None,
        zeta: None,
        gamma: Vec::new(),
        rate: None,
        r: None,
        tanh_r: None,
        phi: None,
        mean_quanta: None,
        quanta_variance: None,
    };
    match resolve_branch(params) {
        Ok(b) => {
            let t = SqueezedTarget::from_zeta(b.zeta);
            rep.q = b.q;
            rep.lambda = Some(b.lambda);
            rep.zeta = Some(b.zeta);
            rep.gamma = spectrum_of(&b, POINT_GAMMAS - 1).gamma;
            rep.rate = Some(-b.lambda.norm().ln());
            rep.r = Some(t.r);
            rep.tanh_r = Some(b.zeta.norm());
            rep.phi = Some(t.phi);
            rep.mean_quanta = Some(t.mean_quanta);
            rep.quanta_variance = Some(t.quanta_variance);
        }
        Err(e) => {
            rep.status = "degenerate";
            rep.reason = Some(e.to_string());
        }
    }
    rep
}

enum Val {
    Re(f64),
    Cx(Complex64),
    Missing,
}

impl PointReport {
    fn entries(&self) -> Vec<(String, Val)> {
        let opt_re = |x: Option<f64>| x.map_or(Val::Missing, Val::Re);
        let opt_cx = |x: Option<Complex64>| x.map_or(Val::Missing, Val::Cx);
        let mut e = vec![
            ("tau_bar".to_string(), Val::Re(self.tau_bar)),
            ("g_bar".to_string(), Val::Re(self.g_bar)),
            ("dp_bar".to_string(), Val::Re(self.dp_bar)),
            ("beta".to_string(), Val::Cx(self.beta)),
            ("M".to_string(), Val::Cx(self.m)),
            ("G".to_string(), Val::Cx(self.g)),
            ("c".to_string(), Val::Re(self.c)),
            ("q".to_string(), Val::Cx(self.q)),
            ("Lambda".to_string(), opt_cx(self.lambda)),
            ("zeta".to_string(), opt_cx(self.zeta)),
        ];
        for n in 0..POINT_GAMMAS {
            e.push((format!("gamma_{n}"), opt_cx(self.gamma.get(n).copied())));
        }
        e.extend([
            ("rate".to_string(), opt_re(self.rate)),
            ("r".to_string(), opt_re(self.r)),
            ("tanh_r".to_string(), opt_re(self.tanh_r)),
            ("phi".to_string(), opt_re(self.phi)),
            ("mean_quanta".to_string(), opt_re(self.mean_quanta)),
            ("quanta_variance".to_string(), opt_re(self.quanta_variance)),
        ]);
        e
    }

    /// `key = value` lines; complex values as `re im`, unavailable ones omitted.
    pub fn to_text(&self) -> String {
        let mut out = format!("status = {}\n", self.status);
        if let Some(r) = &self.reason {
            out += &format!("reason = {r}\n");
        }
        for (k, v) in self.entries() {
            match v {
                Val::Re(x) => out += &format!("{k} = {}\n", fmt_real(x)),
                Val::Cx(z) => out += &format!("{k} = {} {}\n", fmt_real(z.re), fmt_real(z.im)),
                Val::Missing => {}
            }
        }
        out
    }

    /// `quantity,re,im` rows; unavailable values are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,re,im\n");
        out += &format!("status,{},\n", self.status);
        for (k, v) in self.entries() {
            match v {
                Val::Re(x) => out += &format!("{k},{},\n", fmt_real(x)),
                Val::Cx(z) => out += &format!("{k},{},{}\n", fmt_real(z.re), fmt_real(z.im)),
                Val::Missing => out += &format!("{k},,\n"),
            }
        }
        out
    }
}

/// Renders the report; a degenerate point is an error carrying exit code 2
/// after the diagnostics have been written.
pub fn cmd_point(
    params: &ProtocolParams<f64>,
    format: Option<Format>,
) -> (String, Option<CliError>) {
    let rep = evaluate(params);
    let body = match format {
        None => rep.to_text(),
        Some(Format::Csv) => rep.to_csv(),
        Some(Format::Json) => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
    };
    let err = match resolve_branch(params) {
        Ok(_) => None,
        Err(e) => Some(CliError::Core(e)),
    };
    (body, err)
}
