//! Eigensystem cross-checks for the truncated projected operator.
//!
//! The analytic right and left eigenvectors are
//!
//! ```text
//! |u_n> = e^{-zeta A^dag} e^{-eta A} |n>,    <v_n| = <n| e^{eta A} e^{zeta A^dag}
//! ```
//!
//! Both similarity factors are nilpotent on a truncated space, so their
//! exponentials are exact finite sums and `<v_m|u_n>` is exactly `delta_mn`
//! up to rounding. Truncating `V` itself adds spurious eigenvalues that do
//! not belong to the infinite-dimensional operator, so numerical eigenvalues
//! are paired with `gamma_n` by nearest neighbour instead of by ordering.

use nalgebra::{DMatrix, DVector, Schur};
use serde::{Deserialize, Serialize};

use crate::analytic::{resolve_branch, spectrum_of, target_state, BranchSolution, ProtocolParams};
use crate::error::{Error, Result};
use crate::fock::{
    exp_taylor, pair_lowering, pair_raising, squeezed_vacuum, FockMatrix, PureState,
};
use crate::protocol::build_projected_operator;
use crate::scalar::{abs, re, Cx, Real};

/// Truncation added when estimating how much of an error is due to the cutoff.
pub const TRUNCATION_PROBE: usize = 20;

/// Residual tolerance for `|u_n>`: `1e-8 * 3^n`.
pub fn residual_tolerance(n: usize) -> f64 {
    1e-8 * 3f64.powi(n as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub dim: usize,
    /// `|gamma_hat_n - gamma_n| / |gamma_n|` for the nearest numerical eigenvalue.
    pub eigenvalue_rel_error: Vec<f64>,
    /// `||V u_n - gamma_n u_n|| / ||u_n||`.
    pub residuals: Vec<f64>,
    /// `1 - |<u_hat_n|u_n>| / (||u_hat_n|| ||u_n||)` against inverse-iteration vectors.
    pub overlap_deficit: Vec<f64>,
    /// `<v_n|u_n>`, left free by the construction.
    pub biorthogonality_scale: Vec<(f64, f64)>,
    /// `max_m |<v_m|u_n> - delta_mn s_n|`.
    pub biorthogonality_residual: Vec<f64>,
    /// `1 - |<xi|u_0>| / ||u_0||` against the analytic squeezed vacuum.
    pub u0_target_deficit: f64,
    /// `<u_0|u_0>`, which should equal `cosh r`.
    pub u0_norm_sqr: f64,
    /// Largest change of the matched eigenvalues when the cutoff grows.
    pub truncation_estimate: f64,
}

impl CrosscheckReport {
    /// Indices whose residual exceeds [`residual_tolerance`].
    pub fn failing_residuals(&self) -> Vec<usize> {
        (0..self.residuals.len())
            .filter(|&n| !(self.residuals[n] <= residual_tolerance(n)))
            .collect()
    }
}

/// Analytic similarity factors `(R, L)`; column `n` of `R` is `|u_n>`, row `n` of `L` is `<v_n|`.
pub fn analytic_eigenvectors<T: Real>(
    branch: &BranchSolution<T>,
    dim: usize,
) -> Result<(FockMatrix<T>, FockMatrix<T>)> {
    let a = pair_lowering::<T>(dim);
    let ad = pair_raising::<T>(dim);
    let tol = T::lit(1e-15);
    let (zeta, eta) = (branch.zeta, branch.eta);
    let right = exp_taylor(&ad.scale(-zeta), tol)?.mul(&exp_taylor(&a.scale(-eta), tol)?);
    let left = exp_taylor(&a.scale(eta), tol)?.mul(&exp_taylor(&ad.scale(zeta), tol)?);
    Ok((right, left))
}

/// Eigenvalues of a general complex matrix through its Schur form.
pub fn numerical_eigenvalues<T: Real>(m: &FockMatrix<T>) -> Result<Vec<Cx<T>>> {
    let schur = Schur::try_new(m.0.clone(), T::default_epsilon(), 100_000)
        .ok_or_else(|| Error::Eigen("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Eigen("Schur form is not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

/// For each target, the index of the closest candidate not yet taken.
pub fn match_nearest<T: Real>(targets: &[Cx<T>], candidates: &[Cx<T>]) -> Result<Vec<usize>> {
    let mut taken = vec![false; candidates.len()];
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        let best = (0..candidates.len())
            .filter(|&i| !taken[i])
            .min_by(|&i, &j| {
                abs(candidates[i] - t)
                    .partial_cmp(&abs(candidates[j] - t))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or_else(|| Error::Eigen("fewer eigenvalues than requested".into()))?;
        taken[best] = true;
        out.push(best);
    }
    Ok(out)
}

fn norm<T: Real>(v: &DVector<Cx<T>>) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// Right eigenvector for an eigenvalue estimate, by shifted inverse iteration.
fn inverse_iteration<T: Real>(
    m: &FockMatrix<T>,
    lambda: Cx<T>,
    start: &DVector<Cx<T>>,
) -> Result<DVector<Cx<T>>> {
    let n = m.dim();
    // nudge the shift so the LU factorization is not exactly singular
    let shift = lambda + re(T::lit(1e-10) * (T::one() + abs(lambda)));
    let lu = (&m.0 - DMatrix::<Cx<T>>::identity(n, n) * shift).lu();
    let mut x = start.clone();
    for _ in 0..4 {
        let y = lu
            .solve(&x)
            .ok_or_else(|| Error::Eigen("singular shifted matrix".into()))?;
        let ny = norm(&y);
        if !(ny > T::zero()) || !ny.is_finite() {
            return Err(Error::Eigen("inverse iteration broke down".into()));
        }
        x = y.map(|z| z / re(ny));
    }
    Ok(x)
}

fn matched_eigenvalues<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
    gammas: &[Cx<T>],
) -> Result<Vec<Cx<T>>> {
    let v = build_projected_operator(params, dim)?;
    let ev = numerical_eigenvalues(&v)?;
    Ok(match_nearest(gammas, &ev)?
        .into_iter()
        .map(|i| ev[i])
        .collect())
}

/// Compares the truncated operator at `dim` with the analytic eigensystem for `n < n_max`.
pub fn eigen_crosscheck<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
    n_max: usize,
) -> Result<CrosscheckReport> {
    let branch = resolve_branch(params)?;
    if n_max == 0 || n_max > dim {
        return Err(Error::InvalidParams(format!(
            "n_max must lie in 1..={dim}, got {n_max}"
        )));
    }
    let gammas = spectrum_of(&branch, n_max).gamma;
    let v = build_projected_operator(params, dim)?;
    let ev = numerical_eigenvalues(&v)?;
    let matched: Vec<Cx<T>> = match_nearest(&gammas, &ev)?
        .into_iter()
        .map(|i| ev[i])
        .collect();
    let (right, left) = analytic_eigenvectors(&branch, dim)?;

    let mut rep = CrosscheckReport {
        dim,
        eigenvalue_rel_error: Vec::with_capacity(n_max),
        residuals: Vec::with_capacity(n_max),
        overlap_deficit: Vec::with_capacity(n_max),
        biorthogonality_scale: Vec::with_capacity(n_max),
        biorthogonality_residual: Vec::with_capacity(n_max),
        u0_target_deficit: 0.0,
        u0_norm_sqr: 0.0,
        truncation_estimate: 0.0,
    };
    for n in 0..n_max {
        let g = gammas[n];
        rep.eigenvalue_rel_error
            .push((abs(matched[n] - g) / abs(g)).as_f64());

        let u: DVector<Cx<T>> = right.0.column(n).into_owned();
        let nu = norm(&u);
        let resid = norm(&(v.apply(&u) - u.map(|z| z * g))) / nu;
        rep.residuals.push(resid.as_f64());

        let numeric = inverse_iteration(&v, matched[n], &u.map(|z| z / re(nu)))?;
        let ov = abs(numeric.dotc(&u)) / (norm(&numeric) * nu);
        rep.overlap_deficit
            .push((T::one() - ov).max(T::zero()).as_f64());

        let s_n = left.0.row(n).transpose().dot(&u);
        rep.biorthogonality_scale
            .push((s_n.re.as_f64(), s_n.im.as_f64()));
        let worst = (0..n_max)
            .map(|m| {
                let p = left.0.row(m).transpose().dot(&u);
                abs(if m == n { p - s_n } else { p })
            })
            .fold(T::zero(), |a, b| a.max(b));
        rep.biorthogonality_residual.push(worst.as_f64());
    }

    let u0: DVector<Cx<T>> = right.0.column(0).into_owned();
    let n0 = norm(&u0);
    rep.u0_norm_sqr = (n0 * n0).as_f64();
    let target = target_state(params)?;
    let xi = squeezed_vacuum(&target, dim)?;
    let u0_state = PureState {
        amplitudes: u0.map(|z| z / re(n0)),
        tail_mass: T::zero(),
    };
    let ov = abs(xi.overlap(&u0_state)) / xi.norm();
    rep.u0_target_deficit = (T::one() - ov).max(T::zero()).as_f64();

    let wider = matched_eigenvalues(params, dim + TRUNCATION_PROBE, &gammas)?;
    rep.truncation_estimate = matched
        .iter()
        .zip(&wider)
        .map(|(a, b)| (abs(*a - *b) / abs(*b)).as_f64())
        .fold(0.0, f64::max);
    Ok(rep)
}

/// `max |(sum_{n < n_terms} gamma_n |u_n><v_n| - V)_{ij}|` over the leading `block x block` corner.
pub fn reconstruction_error<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
    n_terms: usize,
    block: usize,
) -> Result<T> {
    if n_terms > dim || block > dim {
        return Err(Error::InvalidParams(
            "reconstruction needs n_terms, block <= dim".into(),
        ));
    }
    let branch = resolve_branch(params)?;
    let gammas = spectrum_of(&branch, n_terms).gamma;
    let (right, left) = analytic_eigenvectors(&branch, dim)?;
    let mut r = right.0.columns(0, n_terms).into_owned();
    for (j, mut col) in r.column_iter_mut().enumerate() {
        col.iter_mut().for_each(|z| *z *= gammas[j]);
    }
    let approx = FockMatrix(r * left.0.rows(0, n_terms));
    let v = build_projected_operator(params, dim)?;
    Ok(approx
        .leading_block(block)
        .max_abs_diff(&v.leading_block(block)))
}
