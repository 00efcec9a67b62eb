//! Disentangling of exponentials in the pair algebra `A = a^2/2`,
//! `A^dag`, `B = n + 1/2`:
//!
//! ```text
//! exp(mu A^dag + nu A + lambda B) = exp(x A^dag) exp(y B) exp(z A)
//! ```

use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{abs, re, Cx, Real};

/// Both sides of the disentangling identity together with `kappa = sqrt(lambda^2 - mu nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationTriple<T> {
    pub x: Cx<T>,
    pub y: Cx<T>,
    pub z: Cx<T>,
    pub mu: Cx<T>,
    pub nu: Cx<T>,
    pub lambda: Cx<T>,
    pub kappa: Cx<T>,
}

const SERIES_RADIUS: f64 = 1e-3;

/// `sinh(k)/k` as a function of `k^2`.
fn sinhc<T: Real>(k2: Cx<T>) -> Cx<T> {
    if abs(k2) < T::lit(SERIES_RADIUS) {
        re(T::one()) + k2 * (re(T::lit(1.0 / 6.0)) + k2 * re(T::lit(1.0 / 120.0)))
    } else {
        let k = k2.sqrt();
        k.sinh() / k
    }
}

/// `tanh(k)/k` as a function of `k^2`.
fn tanhc<T: Real>(k2: Cx<T>) -> Cx<T> {
    if abs(k2) < T::lit(SERIES_RADIUS) {
        re(T::one()) - k2 * (re(T::lit(1.0 / 3.0)) - k2 * re(T::lit(2.0 / 15.0)))
    } else {
        let k = k2.sqrt();
        k.tanh() / k
    }
}

/// `cosh(k)` as a function of `k^2`.
fn coshk<T: Real>(k2: Cx<T>) -> Cx<T> {
    if abs(k2) < T::lit(SERIES_RADIUS) {
        re(T::one()) + k2 * (re(T::lit(0.5)) + k2 * re(T::lit(1.0 / 24.0)))
    } else {
        k2.sqrt().cosh()
    }
}

/// Ordered factors `(x, y, z)` of `exp(mu A^dag + nu A + lambda B)`.
///
/// `sinh k / k`, `tanh k / k` and `cosh k` are even in `kappa`, so the
/// result does not depend on the sign of the square root and is smooth
/// through `kappa = 0`. `y` is the principal `-ln(cosh k - lambda sinh k / k)`,
/// the branch continuous with the identity.
pub fn factorize<T: Real>(mu: Cx<T>, nu: Cx<T>, lambda: Cx<T>) -> Result<FactorizationTriple<T>> {
    let k2 = lambda * lambda - mu * nu;
    let t = tanhc(k2);
    let den = re(T::one()) - lambda * t;
    if abs(den) < T::lit(1e-12) {
        return Err(Error::SingularDenominator(abs(den).as_f64()));
    }
    let x = mu * t / den;
    let z = nu * t / den;
    let w = coshk(k2) - lambda * sinhc(k2);
    let y = -w.ln();
    Ok(FactorizationTriple {
        x,
        y,
        z,
        mu,
        nu,
        lambda,
        kappa: k2.sqrt(),
    })
}

/// Inverse of [`factorize`]: the unified exponent of `exp(x A^dag) exp(y B) exp(z A)`.
///
/// `kappa` comes from `cosh kappa = (e^y + e^-y - x z e^-y) / 2` with
/// `cosh^-1 c = ln(c + sqrt(c^2 - 1))`; both signs of
/// `lambda = -+sqrt(kappa^2 + mu nu)` are tried and the one whose
/// factorization reproduces `(x, e^y, z)` is kept.
pub fn unify<T: Real>(x: Cx<T>, y: Cx<T>, z: Cx<T>) -> Result<FactorizationTriple<T>> {
    let one = re(T::one());
    let emy = (-y).exp();
    let c = (y.exp() + emy - x * z * emy) * re(T::lit(0.5));
    let kappa0 = (c + (c * c - one).sqrt()).ln();

    let mut best: Option<(T, FactorizationTriple<T>)> = None;
    for kappa in [kappa0, -kappa0] {
        let k2 = kappa * kappa;
        let sh = sinhc(k2);
        if abs(sh) < T::default_epsilon() {
            continue;
        }
        let mu = x * emy / sh;
        let nu = z * emy / sh;
        let root = (k2 + mu * nu).sqrt();
        for lambda in [-root, root] {
            let Ok(f) = factorize(mu, nu, lambda) else {
                continue;
            };
            let scale = T::one().max(abs(x)).max(abs(z)).max(abs(y.exp()));
            let err = abs(f.x - x).max(abs(f.z - z)).max(abs(f.y.exp() - y.exp())) / scale;
            if best.as_ref().is_none_or(|(e, _)| err < *e) {
                best = Some((
                    err,
                    FactorizationTriple {
                        x,
                        y,
                        z,
                        mu,
                        nu,
                        lambda,
                        kappa,
                    },
                ));
            }
        }
    }
    match best {
        Some((err, t)) if err <= T::lit(1e-8) => Ok(t),
        Some((err, _)) => Err(Error::BranchAmbiguity(err.as_f64())),
        None => Err(Error::BranchAmbiguity(f64::INFINITY)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(a: f64, b: f64) -> Complex64 {
        Complex64::new(a, b)
    }

    #[test]
    fn pure_number_exponent() {
        let lam = c(0.3, -0.7);
        let f = factorize(c(0.0, 0.0), c(0.0, 0.0), lam).unwrap();
        assert_eq!(f.x, c(0.0, 0.0));
        assert_eq!(f.z, c(0.0, 0.0));
        assert!((f.y - lam).norm() < 1e-15);
    }

    #[test]
    fn zero_kappa_limit_is_smooth() {
        // mu nu = lambda^2 puts kappa exactly at zero
        let (mu, nu, lam) = (c(0.2, 0.1), c(0.2, 0.1), c(0.2, 0.1));
        let f = factorize(mu, nu, lam).unwrap();
        let one = c(1.0, 0.0);
        assert!((f.x - mu / (one - lam)).norm() < 1e-15);
        assert!((f.z - nu / (one - lam)).norm() < 1e-15);
        assert!((f.y + (one - lam).ln()).norm() < 1e-15);
        let g = factorize(mu, nu, lam * c(1.0 + 1e-7, 0.0)).unwrap();
        assert!((f.x - g.x).norm() < 1e-6);
    }

    #[test]
    fn singular_denominator_detected() {
        // kappa = 0 and lambda = 1 make 1 - lambda tanh(k)/k vanish
        let e = factorize(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap_err();
        assert!(matches!(e, Error::SingularDenominator(_)));
    }

    #[test]
    fn unify_inverts_factorize() {
        let (mu, nu, lam) = (c(0.21, -0.1), c(-0.05, 0.3), c(0.12, 0.4));
        let f = factorize(mu, nu, lam).unwrap();
        let u = unify(f.x, f.y, f.z).unwrap();
        assert!((u.mu - mu).norm() < 1e-12);
        assert!((u.nu - nu).norm() < 1e-12);
        assert!((u.lambda - lam).norm() < 1e-12);
    }

    #[test]
    fn pure_number_factor_unifies_to_itself() {
        let y = c(0.4, 1.1);
        let u = unify(c(0.0, 0.0), y, c(0.0, 0.0)).unwrap();
        assert!(u.mu.norm() < 1e-15 && u.nu.norm() < 1e-15);
        let f = factorize(u.mu, u.nu, u.lambda).unwrap();
        assert!((f.y.exp() - y.exp()).norm() < 1e-12);
    }
}
