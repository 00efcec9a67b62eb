//! Closed-form scalars frozen from a 50-digit mpmath evaluation
//! (`tests/oracles/scalar_oracle.py`), independent of this crate.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use num_complex::Complex64;
use zsq_core::analytic::{distillation_rate, resolve_branch, target_state, ProtocolParams};

struct Frozen {
    tau_over_pi: f64,
    g_bar: f64,
    dp_bar: f64,
    beta: (f64, f64),
    m: (f64, f64),
    g: (f64, f64),
    c: f64,
    lambda: (f64, f64),
    zeta: (f64, f64),
    eta: (f64, f64),
    gamma0: (f64, f64),
    r: f64,
    rate: f64,
}

const CASES: &[Frozen] = &[
    Frozen {
        tau_over_pi: 0.9,
        g_bar: 1.0,
        dp_bar: 0.4,
        beta: (1.0, -0.35350390391694705063),
        m: (0.95701103434562649041, 0.1641754663691842513),
        g: (0.55498444806522531232, 0.19618916900424929927),
        c: 0.79015067247611018095,
        lambda: (-0.59867771704846405064, -0.2486001558910525947),
        zeta: (-0.35244432786091106179, -0.41176652099615543354),
        eta: (0.21148148302613570506, 0.45262913653514489486),
        gamma0: (0.28028727952725779996, -0.72980579318632243812),
        r: 0.60698928779538889914,
        rate: 0.43349196202328844533,
    },
    Frozen {
        tau_over_pi: 0.9,
        g_bar: 0.7,
        dp_bar: 1.3,
        beta: (1.0, 0.60736119460598943411),
        m: (0.89028784015375033648, -0.24918322783150153111),
        g: (2.3605588606349207658, -1.4337118495329788026),
        c: 1.7975927798831506617,
        lambda: (-0.19187085937208500186, -0.44271151798536107612),
        zeta: (-0.69098280881929146986, -0.20769512668579683845),
        eta: (0.82325670564911796086, 0.78488269349123876789),
        gamma0: (0.19468497241397054145, -0.61195936397263197967),
        r: 0.91081323931672561205,
        rate: 0.72877078263944126469,
    },
    Frozen {
        tau_over_pi: 0.6,
        g_bar: 1.0,
        dp_bar: 0.4,
        beta: (1.0, 0.0027451904698289921848),
        m: (0.99999717398901069992, -0.0013725887699686418854),
        g: (0.41888228147348846292, -0.0011499116470812459423),
        c: 0.64721359549995793928,
        lambda: (-0.18976581526368183033, -0.63981560161920061045),
        zeta: (-0.026369872461982667038, -0.20725342966788109387),
        eta: (0.023212741540027648311, 0.19909373125123840256),
        gamma0: (0.4877709337407880134, -0.65531768741874790941),
        r: 0.21204626290511681277,
        rate: 0.40441925038181627263,
    },
    Frozen {
        tau_over_pi: 0.6,
        g_bar: 0.7,
        dp_bar: 1.3,
        beta: (1.0, 1.638851301302834353),
        m: (0.629357767195562481, -0.35324517210340502571),
        g: (0.58819637253032122732, -0.96396639054292367326),
        c: 1.4724109297624043119,
        lambda: (0.2764920535232955936, -0.46689521339503851938),
        zeta: (-0.40493946398134970133, -0.2851305017965237713),
        eta: (0.34154608604480391736, 0.39680740232034705543),
        gamma0: (0.27391081437252429445, -0.45564281887837134861),
        r: 0.54299647832931355026,
        rate: 0.61134172091039344781,
    },
    Frozen {
        tau_over_pi: 1.4,
        g_bar: 1.0,
        dp_bar: 0.4,
        beta: (1.0, -1.0080548396185628285),
        m: (0.7746784889804356629, 0.32270413928230747112),
        g: (0.20776248573774200185, 0.20943597923911346073),
        c: 0.64721359549995793928,
        lambda: (-0.088421250923675711443, 0.81603267719096038695),
        zeta: (-0.10732865366428909739, 0.097848423349045336038),
        eta: (0.10542792085211036074, -0.10025783276228247759),
        gamma0: (-0.25120486083535249008, -0.71760925361156979759),
        r: 0.1462712083068571232,
        rate: 0.1974646665148480903,
    },
    Frozen {
        tau_over_pi: 1.4,
        g_bar: 0.7,
        dp_bar: 1.3,
        beta: (1.0, -1.4264796379201643301),
        m: (0.67213559905809109132, 0.34965704952731212626),
        g: (0.71436747115889504023, 1.0190306516006840318),
        c: 1.4724109297624043119,
        lambda: (0.24972959625939367601, 0.41340999809021197534),
        zeta: (-0.40504826805989468256, 0.33542419180776765717),
        eta: (0.3010351666749130664, -0.43990230232534240061),
        gamma0: (-0.28741586778767150322, -0.44117699626280156329),
        r: 0.58446422387548512608,
        rate: 0.72777356654153215642,
    },
];

const TOL: f64 = 1e-12;

fn assert_cx(label: &str, got: Complex64, want: (f64, f64)) {
    let want = Complex64::new(want.0, want.1);
    assert!(
        (got - want).norm() <= TOL * (1.0 + want.norm()),
        "{label}: got {got}, want {want}"
    );
}

#[test]
fn closed_form_scalars_match_high_precision_values() {
    for case in CASES {
        let prm = ProtocolParams::new(case.tau_over_pi * PI, case.g_bar, case.dp_bar).unwrap();
        let b = resolve_branch(&prm).unwrap();
        let tag = format!("({} pi, {}, {})", case.tau_over_pi, case.g_bar, case.dp_bar);
        assert_cx(&format!("beta {tag}"), b.scalars.beta, case.beta);
        assert_cx(&format!("M {tag}"), b.scalars.m, case.m);
        assert_cx(&format!("G {tag}"), b.scalars.g, case.g);
        assert!((b.scalars.c - case.c).abs() <= TOL, "c {tag}");
        assert_cx(&format!("Lambda {tag}"), b.lambda, case.lambda);
        assert_cx(&format!("zeta {tag}"), b.zeta, case.zeta);
        assert_cx(&format!("eta {tag}"), b.eta, case.eta);
        assert_cx(&format!("gamma0 {tag}"), b.gamma0(), case.gamma0);
        let t = target_state(&prm).unwrap();
        assert!((t.r - case.r).abs() <= TOL, "r {tag}: {}", t.r);
        assert!(
            (distillation_rate(&prm).unwrap() - case.rate).abs() <= TOL,
            "rate {tag}"
        );
    }
}

#[test]
fn worked_point_squeezing_parameter() {
    // tanh r = 0.5420..., r = 0.6070...
    let prm = ProtocolParams::new(0.9 * PI, 1.0, 0.4).unwrap();
    let t = target_state(&prm).unwrap();
    assert!((t.r.tanh() - 0.54200436).abs() < 1e-7);
    assert!((t.r - 0.60698929).abs() < 1e-7);
}
