//! The measurement protocol on a truncated Fock space.
//!
//! Between two successful projections of the particle the mode evolves under
//! `V = M exp(-i tau (n + 1/2)) exp(-(G/2) X^2)`. After `N` successes the
//! state is `V^N rho V^dag^N / P(N)` with `P(N) = Tr(V^N rho V^dag^N)`.
//! The state is renormalized every step and `P(N)` is accumulated as a sum
//! of logarithms, since it decays like `|gamma_0|^{2N}`.

use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use crate::analytic::{compute_scalars, target_state, ProtocolParams, SqueezedTarget};
use crate::error::{Error, Result};
use crate::fock::{
    apply_exp_hermitian, coherent_state, fidelity, free_rotation, ladder, purity,
    squeezed_tail_mass, squeezed_vacuum, thermal_state, DensityMatrix, FockMatrix, PureState,
};
use crate::scalar::{cis, re, Cx, Real};

/// Smallest truncation ever chosen automatically.
pub const MIN_AUTO_DIM: usize = 40;

/// Target tail mass used when the dimension is picked automatically.
pub const AUTO_DIM_TOL: f64 = 1e-10;

/// Rotated quadrature `X = a^dag e^{i tau/2} + a e^{-i tau/2}` (Hermitian).
pub fn coupling_quadrature<T: Real>(tau_bar: T, dim: usize) -> FockMatrix<T> {
    let l = ladder::<T>(dim);
    let half = tau_bar / T::lit(2.0);
    FockMatrix(l.a_dag.0 * cis(half) + l.a.0 * cis(-half))
}

pub fn build_projected_operator<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
) -> Result<FockMatrix<T>> {
    let s = compute_scalars(params);
    let x = coupling_quadrature(params.tau_bar, dim);
    let half_g = s.g * re(T::lit(0.5));
    let gauss = apply_exp_hermitian(|v| (-(half_g * re(v * v))).exp(), &x)?;
    Ok(free_rotation(dim, params.tau_bar).mul(&gauss).scale(s.m))
}

/// Initial field state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialState<T> {
    Vacuum,
    Coherent(Cx<T>),
    Thermal(T),
}

impl<T: Real> InitialState<T> {
    pub fn density(&self, dim: usize) -> Result<DensityMatrix<T>> {
        match *self {
            Self::Vacuum => Ok(PureState::vacuum(dim).to_density()),
            Self::Coherent(alpha) => Ok(coherent_state(alpha, dim)?.to_density()),
            Self::Thermal(nbar) => thermal_state(nbar, dim),
        }
    }

    /// Smallest dimension at which the constructor accepts this state.
    pub fn min_dim(&self) -> usize {
        let mut d = 2;
        while self.density(d).is_err() && d < 100_000 {
            d += 1;
        }
        d
    }
}

/// One line of a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow<T> {
    /// Number of successful measurements so far.
    pub n: usize,
    /// Success probability of the latest measurement.
    pub step_prob: T,
    /// Probability that all `n` measurements succeeded.
    pub cum_prob: T,
    /// `ln cum_prob`; stays finite after `cum_prob` underflows.
    pub log_cum_prob: T,
    /// Overlap with the analytic target; absent at degenerate parameters.
    pub fidelity: Option<T>,
    pub purity: T,
}

#[derive(Debug, Clone)]
pub struct SimulationTrace<T: Real> {
    pub dim: usize,
    /// Rows for `n = 0 ..= n_steps`; row 0 describes the initial state.
    pub rows: Vec<TraceRow<T>>,
    pub final_state: DensityMatrix<T>,
    pub target: Option<SqueezedTarget<T>>,
}

pub fn run<T: Real>(
    params: &ProtocolParams<T>,
    rho0: &DensityMatrix<T>,
    n_steps: usize,
    dim: usize,
) -> Result<SimulationTrace<T>> {
    if rho0.dim() != dim {
        return Err(Error::DimMismatch {
            left: rho0.dim(),
            right: dim,
        });
    }
    if n_steps == 0 {
        return Err(Error::InvalidParams(
            "a run needs at least one measurement".into(),
        ));
    }
    let v = build_projected_operator(params, dim)?;
    let v_dag = v.adjoint();

    let target = target_state(params).ok();
    let xi = match &target {
        Some(t) => Some(squeezed_vacuum(t, dim)?),
        None => None,
    };

    let tr0 = rho0.trace();
    let mut rho = DensityMatrix(rho0.0.map(|z| z / re(tr0)));
    let row = |n, step_prob: T, log_p: T, rho: &DensityMatrix<T>| -> Result<TraceRow<T>> {
        Ok(TraceRow {
            n,
            step_prob,
            cum_prob: log_p.exp(),
            log_cum_prob: log_p,
            fidelity: xi.as_ref().map(|x| fidelity(rho, x)).transpose()?,
            purity: purity(rho),
        })
    };

    let mut rows = Vec::with_capacity(n_steps + 1);
    let mut log_p = T::zero();
    rows.push(row(0, T::one(), log_p, &rho)?);
    for n in 1..=n_steps {
        let next = &v.0 * &rho.0 * &v_dag.0;
        let p = next.trace().re;
        if !(p > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "survival probability vanished at step {n}"
            )));
        }
        // renormalize and re-symmetrize against rounding drift
        let next = next.map(|z| z / re(p));
        rho = DensityMatrix((&next + next.adjoint()).map(|z| z * re(T::lit(0.5))));
        log_p += p.ln();
        rows.push(row(n, p, log_p, &rho)?);
    }
    Ok(SimulationTrace {
        dim,
        rows,
        final_state: rho,
        target,
    })
}

/// Smallest dimension (at least [`MIN_AUTO_DIM`]) whose squeezed-vacuum
/// tail mass is below `tol`.
pub fn choose_dim<T: Real>(target: &SqueezedTarget<T>, tol: T) -> usize {
    let ok = |d: usize| squeezed_tail_mass(target, d) < tol;
    if ok(MIN_AUTO_DIM) {
        return MIN_AUTO_DIM;
    }
    let mut lo = MIN_AUTO_DIM;
    let mut hi = 2 * MIN_AUTO_DIM;
    while !ok(hi) {
        lo = hi;
        hi *= 2;
        if hi > 1 << 24 {
            return hi;
        }
    }
    // invariant: !ok(lo), ok(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Dimension large enough for both the distilled target and the initial state.
pub fn auto_dim<T: Real>(params: &ProtocolParams<T>, initial: &InitialState<T>) -> usize {
    let for_target = target_state(params)
        .map(|t| choose_dim(&t, T::lit(AUTO_DIM_TOL)))
        .unwrap_or(MIN_AUTO_DIM);
    for_target.max(initial.min_dim())
}

/// Convenience wrapper: builds the initial state and picks the dimension.
pub fn run_from<T: Real>(
    params: &ProtocolParams<T>,
    initial: &InitialState<T>,
    n_steps: usize,
    dim: Option<usize>,
) -> Result<SimulationTrace<T>> {
    let dim = dim.unwrap_or_else(|| auto_dim(params, initial));
    let rho0 = initial.density(dim)?;
    run(params, &rho0, n_steps, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::resolve_branch;
    use crate::fock::PureState;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn worked() -> ProtocolParams<f64> {
        ProtocolParams::new(0.9 * PI, 1.0, 0.4).unwrap()
    }

    #[test]
    fn zero_coupling_operator_is_diagonal_rotation() {
        let prm = ProtocolParams::new(0.7, 0.0, 0.5).unwrap();
        let v = build_projected_operator(&prm, 12).unwrap();
        let m = compute_scalars(&prm).m;
        for i in 0..12 {
            for j in 0..12 {
                if i != j {
                    assert!(v.0[(i, j)].norm() < 1e-14);
                }
            }
            assert!((v.0[(i, i)].norm() - m.norm()).abs() < 1e-14);
        }
    }

    #[test]
    fn leading_block_is_stable_under_truncation() {
        let a = build_projected_operator(&worked(), 60).unwrap();
        let b = build_projected_operator(&worked(), 80).unwrap();
        assert!(a.leading_block(10).max_abs_diff(&b.leading_block(10)) < 1e-10);
    }

    #[test]
    fn vacuum_row_zero_fidelity() {
        let prm = worked();
        let t = target_state(&prm).unwrap();
        let dim = choose_dim(&t, 1e-10);
        let tr = run(&prm, &PureState::vacuum(dim).to_density(), 1, dim).unwrap();
        assert!((tr.rows[0].fidelity.unwrap() - 1.0 / t.r.cosh()).abs() < 1e-9);
        assert_eq!(tr.rows[0].cum_prob, 1.0);
        assert!(tr.rows[1].fidelity.unwrap() > tr.rows[0].fidelity.unwrap());
    }

    #[test]
    fn cumulative_probability_is_product_of_steps() {
        let tr = run_from(
            &worked(),
            &InitialState::Coherent(Complex64::new(1.0, 0.0)),
            30,
            Some(60),
        )
        .unwrap();
        let mut prod = 1.0;
        for w in tr.rows.windows(2) {
            prod *= w[1].step_prob;
            assert!((w[1].cum_prob - prod).abs() <= 1e-12 * prod);
            assert!(w[1].cum_prob <= w[0].cum_prob);
        }
        for r in &tr.rows {
            let f = r.fidelity.unwrap();
            assert!((0.0..=1.0 + 1e-10).contains(&f));
        }
    }

    #[test]
    fn step_probability_tends_to_dominant_eigenvalue() {
        let tr = run_from(&worked(), &InitialState::Thermal(0.5), 80, None).unwrap();
        let g0 = resolve_branch(&worked()).unwrap().gamma0().norm_sqr();
        assert!((tr.rows.last().unwrap().step_prob - g0).abs() < 1e-9);
        let f = tr.rows.last().unwrap().fidelity.unwrap();
        assert!(f > 0.999, "fidelity {f}");
        assert!(tr.rows.last().unwrap().purity > 0.999);
    }

    #[test]
    fn degenerate_run_reports_no_fidelity() {
        let prm = ProtocolParams::new(PI, 1.0, 1.0).unwrap();
        let tr = run_from(&prm, &InitialState::Vacuum, 3, Some(30)).unwrap();
        assert!(tr.rows.iter().all(|r| r.fidelity.is_none()));
        assert!(tr.target.is_none());
    }

    #[test]
    fn run_argument_errors() {
        let rho = PureState::<f64>::vacuum(10).to_density();
        assert!(matches!(
            run(&worked(), &rho, 3, 12),
            Err(Error::DimMismatch { .. })
        ));
        assert!(run(&worked(), &rho, 0, 10).is_err());
    }

    #[test]
    fn choose_dim_is_minimal_and_monotone() {
        assert_eq!(
            choose_dim(&SqueezedTarget::from_polar(0.0, 0.0), 1e-10),
            MIN_AUTO_DIM
        );
        let t = SqueezedTarget::from_polar(0.54, 0.0);
        let d = choose_dim(&t, 1e-10);
        assert!(squeezed_tail_mass(&t, d) < 1e-10);
        assert!(d == MIN_AUTO_DIM || squeezed_tail_mass(&t, d - 1) >= 1e-10);
        let mut last = 0;
        for r in [0.0, 0.3, 0.6, 0.9, 1.2, 1.5] {
            let d = choose_dim(&SqueezedTarget::from_polar(r, 0.0), 1e-10);
            assert!(d >= last);
            last = d;
        }
        assert!(last > MIN_AUTO_DIM);
    }
}
