//! Closed-form scalars of the projected evolution operator.
//!
//! Everything here is a pure function of the three dimensionless knobs in
//! [`ProtocolParams`]. The operator between two successful measurements is
//!
//! ```text
//! V = M exp(-i tau (n + 1/2)) exp(-(G/2) X^2),   X = a^dag e^{i tau/2} + a e^{-i tau/2}
//! ```
//!
//! and its spectrum is a geometric ladder `gamma_n = gamma_0 Lambda^n`, where
//! `Lambda` is the root of `w^2 - 2 q w + 1 = 0` lying strictly inside the
//! unit circle. The distilled state is the squeezed vacuum generated by the
//! analogous inner root `zeta` of `w^2 - 2 q~ w + 1 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{abs, cis, cx, re, Cx, Real};
use nalgebra::ComplexField;

/// Dimensionless protocol parameters: measurement period `omega tau`,
/// coupling `g sqrt(m / hbar omega)` and momentum spread
/// `Delta p_0 / sqrt(m hbar omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams<T> {
    pub tau_bar: T,
    pub g_bar: T,
    pub dp_bar: T,
}

impl<T: Real> ProtocolParams<T> {
    /// `tau_bar` and `dp_bar` must be strictly positive; any finite `g_bar`
    /// (including zero) is accepted.
    pub fn new(tau_bar: T, g_bar: T, dp_bar: T) -> Result<Self> {
        let finite = |x: T| x.is_finite();
        if !(finite(tau_bar) && finite(g_bar) && finite(dp_bar)) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if tau_bar <= T::zero() {
            return Err(Error::InvalidParams(format!(
                "tau_bar must be > 0, got {tau_bar}"
            )));
        }
        if dp_bar <= T::zero() {
            return Err(Error::InvalidParams(format!(
                "dp_bar must be > 0, got {dp_bar}"
            )));
        }
        Ok(Self {
            tau_bar,
            g_bar,
            dp_bar,
        })
    }
}

/// Coefficients of the Gaussian momentum integral and of the quadratic
/// exponent it produces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorScalars<T> {
    /// Gaussian exponent coefficient; its real part is exactly one.
    pub beta: Cx<T>,
    /// Prefactor `1 / sqrt(beta)` (principal root).
    pub m: Cx<T>,
    /// Quadratic strength `M^2 c^2`.
    pub g: Cx<T>,
    /// Linear coupling `g_bar dp_bar sqrt(2 (1 - cos tau_bar))`.
    pub c: T,
}

/// Degeneracy cutoffs used by [`resolve_branch_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// `|G|` below this is treated as zero coupling.
    pub eps_g: T,
    /// Inner roots with `|w| >= 1 - eps_lambda` are treated as unimodular.
    ///
    /// The effective cutoff never drops below [`root_rounding_floor`]: near
    /// a double root a rounding error `d` in `q` moves the roots by
    /// `sqrt(2 d)`, so `tau_bar = pi` in floating point leaves `|Lambda|`
    /// about `1e-8` short of one.
    pub eps_lambda: T,
}

/// Smallest distance from the unit circle that rounding in `q` alone cannot produce.
pub fn root_rounding_floor<T: Real>() -> T {
    (T::lit(64.0) * T::default_epsilon()).sqrt()
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eps_g: T::lit(1e-10),
            eps_lambda: T::lit(1e-10),
        }
    }
}

/// Branch-resolved quantities governing the spectrum and eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchSolution<T> {
    pub scalars: OperatorScalars<T>,
    pub q: Cx<T>,
    pub q_tilde: Cx<T>,
    /// Inner root of `w^2 - 2 q w + 1`; ratio of consecutive eigenvalues.
    pub lambda: Cx<T>,
    /// The rejected outer root, `1 / lambda`.
    pub lambda_outer: Cx<T>,
    /// Logarithm of `lambda` on the branch continuous with `-i tau_bar` at
    /// zero coupling; fixes the sign of `lambda^{1/2}` in `gamma_0`.
    pub l: Cx<T>,
    /// Inner root of `w^2 - 2 q~ w + 1`; squeezing amplitude of the target.
    pub zeta: Cx<T>,
    /// Coefficient of the lowering generator in the similarity transform.
    pub eta: Cx<T>,
    /// Whether the principal-branch sign rule picks the upper sign
    /// (`lambda = q + sqrt(q^2 - 1)`).
    pub upper_branch: bool,
}

impl<T: Real> BranchSolution<T> {
    /// Largest-magnitude eigenvalue `gamma_0 = M exp(L / 2)`.
    pub fn gamma0(&self) -> Cx<T> {
        self.scalars.m * (self.l * re(T::lit(0.5))).exp()
    }
}

/// Eigenvalues `gamma_0 .. gamma_{n_max}` of the projected operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub gamma: Vec<Cx<T>>,
}

/// Parameters of the distilled squeezed vacuum and its photon statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedTarget<T> {
    pub r: T,
    pub phi: T,
    pub mean_quanta: T,
    pub quanta_variance: T,
}

impl<T: Real> SqueezedTarget<T> {
    /// Target for squeezing parameter `r >= 0` and phase `phi`.
    pub fn from_polar(r: T, phi: T) -> Self {
        let s2 = r.sinh() * r.sinh();
        Self {
            r,
            phi,
            mean_quanta: s2,
            quanta_variance: T::lit(2.0) * s2 * (s2 + T::one()),
        }
    }

    /// Target whose one-mode generator is `exp(-(zeta/2) a^dag^2)`; requires `|zeta| < 1`.
    pub fn from_zeta(zeta: Cx<T>) -> Self {
        Self::from_polar(abs(zeta).atanh(), zeta.im.atan2(zeta.re))
    }

    /// `tanh r e^{i phi}`.
    pub fn zeta(&self) -> Cx<T> {
        cis(self.phi) * re(self.r.tanh())
    }
}

/// `1 - sin(t)/t`, with a Taylor fallback where the direct form cancels.
fn one_minus_sinc<T: Real>(t: T) -> T {
    if t.abs() < T::lit(1e-2) {
        let t2 = t * t;
        // t^2/6 - t^4/120 + t^6/5040 - t^8/362880
        t2 * (T::lit(1.0 / 6.0)
            - t2 * (T::lit(1.0 / 120.0)
                - t2 * (T::lit(1.0 / 5040.0) - t2 * T::lit(1.0 / 362880.0))))
    } else {
        T::one() - t.sin() / t
    }
}

pub fn compute_scalars<T: Real>(params: &ProtocolParams<T>) -> OperatorScalars<T> {
    let ProtocolParams {
        tau_bar,
        g_bar,
        dp_bar,
    } = *params;
    let two = T::lit(2.0);
    let im_beta =
        dp_bar * dp_bar * tau_bar * (T::one() - two * g_bar * g_bar * one_minus_sinc(tau_bar));
    let beta = cx(T::one(), im_beta);
    let m = beta.sqrt().recip();
    // sqrt(2 (1 - cos t)) = 2 |sin(t/2)| without cancellation near t = 0
    let c = g_bar * dp_bar * two * (tau_bar / two).sin().abs();
    let g = m * m * re(c * c);
    OperatorScalars { beta, m, g, c }
}

/// Roots of `w^2 - 2 p w + 1 = 0` ordered `(inner, outer)` by magnitude.
///
/// The outer root is formed without cancellation and the inner one as its
/// reciprocal, so the pair multiplies to one to rounding.
pub fn reciprocal_roots<T: Real>(p: Cx<T>) -> (Cx<T>, Cx<T>) {
    let s = (p * p - re(T::one())).sqrt();
    let (a, b) = (p + s, p - s);
    let outer = if a.norm_sqr() >= b.norm_sqr() { a } else { b };
    (outer.recip(), outer)
}

pub fn resolve_branch<T: Real>(params: &ProtocolParams<T>) -> Result<BranchSolution<T>> {
    resolve_branch_with(params, &Tolerances::default())
}

pub fn resolve_branch_with<T: Real>(
    params: &ProtocolParams<T>,
    tol: &Tolerances<T>,
) -> Result<BranchSolution<T>> {
    let scalars = compute_scalars(params);
    let g = scalars.g;
    let tau = params.tau_bar;
    if abs(g) < tol.eps_g {
        return Err(Error::NoDistillation {
            reason: format!("vanishing quadratic strength |G| = {:.3e}", abs(g).as_f64()),
        });
    }
    let (ct, st) = (tau.cos(), tau.sin());
    let i = Cx::<T>::i();
    let q = re(ct) + i * g * re(st);
    let q_tilde = re(ct) + i * re(st) / g;

    let (lambda, lambda_outer) = reciprocal_roots(q);
    let limit = T::one() - tol.eps_lambda.max(root_rounding_floor());
    if abs(lambda) >= limit {
        return Err(Error::NoDistillation {
            reason: format!(
                "both roots of w^2 - 2qw + 1 are unimodular (|Lambda| = {:.12})",
                abs(lambda).as_f64()
            ),
        });
    }
    let (zeta, _) = reciprocal_roots(q_tilde);
    if abs(zeta) >= limit {
        return Err(Error::NoDistillation {
            reason: format!(
                "target not normalizable (|zeta| = {:.12})",
                abs(zeta).as_f64()
            ),
        });
    }
    let eta = (re(T::lit(2.0)) * (zeta - q_tilde)).recip();

    // gamma_0 = <0| V e^{-zeta A^dag} |0>, a Gaussian integral in the rotated
    // quadrature. Writing it as M exp(L/2) pins the branch of L.
    let w = re(T::one()) + g * (re(T::one()) - zeta * cis(-tau));
    let l = -(i * re(tau)) - w.ln();

    let s = (q * q - re(T::one())).sqrt();
    let upper_branch = (q + s).norm_sqr() < T::one();

    Ok(BranchSolution {
        scalars,
        q,
        q_tilde,
        lambda,
        lambda_outer,
        l,
        zeta,
        eta,
        upper_branch,
    })
}

pub fn spectrum<T: Real>(params: &ProtocolParams<T>, n_max: usize) -> Result<Spectrum<T>> {
    Ok(spectrum_of(&resolve_branch(params)?, n_max))
}

pub fn spectrum_of<T: Real>(branch: &BranchSolution<T>, n_max: usize) -> Spectrum<T> {
    let m = branch.scalars.m;
    let gamma = (0..=n_max)
        .map(|n| m * (branch.l * re(T::from_usize_lossy(n) + T::lit(0.5))).exp())
        .collect();
    Spectrum { gamma }
}

/// `-ln |gamma_1 / gamma_0| = -ln |Lambda|`.
pub fn distillation_rate<T: Real>(params: &ProtocolParams<T>) -> Result<T> {
    Ok(-abs(resolve_branch(params)?.lambda).ln())
}

pub fn target_state<T: Real>(params: &ProtocolParams<T>) -> Result<SqueezedTarget<T>> {
    Ok(SqueezedTarget::from_zeta(resolve_branch(params)?.zeta))
}

/// Variance of `x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)` in
/// the squeezed vacuum of `target`.
///
/// The anti-squeezed axis sits at `theta = phi/2 + pi/2` and the squeezed
/// one at `theta = phi/2`: the quadrature frame rotates at half the phase
/// of `zeta`.
pub fn quadrature_variance<T: Real>(target: &SqueezedTarget<T>, theta: T) -> T {
    let d = theta - target.phi / T::lit(2.0);
    let e2r = (T::lit(2.0) * target.r).exp();
    T::lit(0.5) * (e2r * d.sin() * d.sin() + d.cos() * d.cos() / e2r)
}

/// Whether `x_theta` has variance below the vacuum value 1/2, i.e.
/// `sin^2(theta - phi/2) < 1 / (e^{2r} + 1)`.
pub fn is_squeezed_quadrature<T: Real>(target: &SqueezedTarget<T>, theta: T) -> bool {
    let d = theta - target.phi / T::lit(2.0);
    target.r > T::zero() && d.sin() * d.sin() < ((T::lit(2.0) * target.r).exp() + T::one()).recip()
}
