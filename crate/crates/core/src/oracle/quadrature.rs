//! Momentum-integral route to the projected operator.
//!
//! Before the Gaussian integral is done in closed form the operator reads
//!
//! ```text
//! V = e^{-i tau (n + 1/2)} (2 pi)^{-1/2} \int du exp(-beta u^2 / 2) exp(i c u X)
//! ```
//!
//! with `u = p / Delta p_0`. On each eigenvector of the Hermitian `X` the
//! integrand is scalar, so the integral is evaluated per eigenvalue by
//! Gauss-Hermite quadrature with the `Re beta = 1` Gaussian as weight and
//! the `exp(-i Im(beta) u^2 / 2)` chirp folded into the integrand.

use nalgebra::DMatrix;

use crate::analytic::{compute_scalars, ProtocolParams};
use crate::error::{Error, Result};
use crate::fock::{free_rotation, hermitian_eigen, FockMatrix};
use crate::protocol::coupling_quadrature;
use crate::scalar::{cis, re, Cx, Real};

/// Nodes and weights for `\int e^{-s^2} f(s) ds ~ sum_j w_j f(s_j)`.
#[derive(Debug, Clone)]
pub struct GaussHermite<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

/// Gauss-Hermite rule with `k` nodes.
///
/// Nodes start as eigenvalues of the Jacobi matrix and are polished by
/// Newton's method on the orthonormal Hermite recurrence, which also gives
/// the weights. The recurrence is rescaled on the fly so large `k` neither
/// overflows nor loses the weights of the outer nodes to `inf / inf`.
pub fn gauss_hermite<T: Real>(k: usize) -> GaussHermite<T> {
    assert!(k >= 1);
    let two = T::lit(2.0);
    let kf = T::from_usize_lossy(k);
    let pim4 = T::pi().powf(T::lit(-0.25));
    let jacobi = DMatrix::<T>::from_fn(k, k, |i, j| {
        if i + 1 == j || j + 1 == i {
            (T::from_usize_lossy(i.max(j)) / two).sqrt()
        } else {
            T::zero()
        }
    });
    let mut guesses: Vec<T> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    guesses.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));

    // (p_k(z), p_k'(z)) up to the common factor e^{log_scale}
    let eval = |z: T| {
        let mut p1 = pim4;
        let mut p2 = T::zero();
        let mut log_scale = T::zero();
        for j in 0..k {
            let p3 = p2;
            p2 = p1;
            let jf = T::from_usize_lossy(j);
            p1 = z * (two / (jf + T::one())).sqrt() * p2 - (jf / (jf + T::one())).sqrt() * p3;
            let big = p1.abs().max(p2.abs());
            if big > T::lit(1e100) {
                p1 /= big;
                p2 /= big;
                log_scale += big.ln();
            }
        }
        (p1, (two * kf).sqrt() * p2, log_scale)
    };

    let mut nodes = vec![T::zero(); k];
    let mut weights = vec![T::zero(); k];
    for i in 0..k.div_ceil(2) {
        let mut z = guesses[i];
        for _ in 0..8 {
            let (p, dp, _) = eval(z);
            let step = p / dp;
            z -= step;
            if step.abs() <= T::lit(2.0) * T::default_epsilon() * z.abs().max(T::one()) {
                break;
            }
        }
        let (_, dp, log_scale) = eval(z);
        let log_pp = dp.abs().ln() + log_scale;
        if i == k - 1 - i {
            z = T::zero();
        }
        nodes[i] = z;
        nodes[k - 1 - i] = -z;
        let w = two * (-two * log_pp).exp();
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    GaussHermite { nodes, weights }
}

/// `(2 pi)^{-1/2} \int du exp(-beta u^2/2 + i c x u)` for each `x`.
fn gaussian_transform<T: Real>(rule: &GaussHermite<T>, im_beta: T, c: T, xs: &[T]) -> Vec<Cx<T>> {
    let sqrt2 = T::lit(2.0).sqrt();
    let norm = T::pi().sqrt().recip();
    // u = sqrt(2) s maps the weight e^{-u^2/2} onto e^{-s^2}
    let chirped: Vec<(T, Cx<T>)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| (sqrt2 * s, cis(-im_beta * s * s) * re(w * norm)))
        .collect();
    xs.iter()
        .map(|&x| {
            chirped
                .iter()
                .fold(Cx::new(T::zero(), T::zero()), |acc, &(u, wc)| {
                    acc + wc * cis(c * x * u)
                })
        })
        .collect()
}

fn quadrature_operator<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
    k: usize,
) -> Result<FockMatrix<T>> {
    let s = compute_scalars(params);
    let eig = hermitian_eigen(&coupling_quadrature(params.tau_bar, dim))?;
    let rule = gauss_hermite::<T>(k);
    let xs: Vec<T> = eig.values.iter().copied().collect();
    let vals = gaussian_transform(&rule, s.beta.im, s.c, &xs);
    let f = eig.map(|x| {
        let idx = xs
            .iter()
            .position(|&v| v == x)
            .expect("eigenvalue from the same decomposition");
        vals[idx]
    });
    Ok(free_rotation(dim, params.tau_bar).mul(&f))
}

/// Projected operator from the momentum integral with `k` nodes, checked
/// against a `2k`-node evaluation.
pub fn momentum_quadrature_operator<T: Real>(
    params: &ProtocolParams<T>,
    dim: usize,
    k: usize,
) -> Result<FockMatrix<T>> {
    if k < 100 {
        return Err(Error::InvalidParams(format!(
            "quadrature needs at least 100 nodes, got {k}"
        )));
    }
    let s = compute_scalars(params);
    debug_assert!(
        (s.g * s.beta - re(s.c * s.c)).norm_sqr().sqrt() <= T::lit(1e-10) * (T::one() + s.c * s.c),
        "G beta = c^2"
    );
    let coarse = quadrature_operator(params, dim, k)?;
    let fine = quadrature_operator(params, dim, 2 * k)?;
    let change = coarse.max_abs_diff(&fine);
    if change > T::lit(1e-8) {
        return Err(Error::QuadratureNotConverged {
            change: change.as_f64(),
        });
    }
    Ok(fine)
}
