//! Independent routes to the quantities computed in [`crate::analytic`]
//! and [`crate::protocol`], used to cross-check them.

mod disentangle;
mod eigen;
mod quadrature;
mod verify;

pub use disentangle::{factorize, unify, FactorizationTriple};
pub use eigen::{
    analytic_eigenvectors, eigen_crosscheck, match_nearest, numerical_eigenvalues,
    reconstruction_error, residual_tolerance, CrosscheckReport, TRUNCATION_PROBE,
};
pub use quadrature::{gauss_hermite, momentum_quadrature_operator, GaussHermite};
pub use verify::{
    standard_grid, verify, verify_points, CheckOutcome, Skipped, VerificationReport, VerifyLevel,
};

use nalgebra::{Matrix2, SymmetricEigen};

use crate::scalar::{Cx, Real};

/// Normalizability of `exp(-(zeta/2) a^dag^2)|0>` in the position picture.
///
/// The Gaussian exponent is governed by `[[1 + Re zeta, Im zeta], [Im zeta, 1 - Re zeta]]`,
/// whose eigenvalues are `1 -+ |zeta|`. Returns whether both are positive,
/// together with the eigenvalues in ascending order. Eigenvalues within a
/// few ulps of zero count as zero.
pub fn normalizability_check<T: Real>(zeta: Cx<T>) -> (bool, (T, T)) {
    let one = T::one();
    let m = Matrix2::new(one + zeta.re, zeta.im, zeta.im, one - zeta.re);
    let e = SymmetricEigen::new(m).eigenvalues;
    let (lo, hi) = if e[0] <= e[1] {
        (e[0], e[1])
    } else {
        (e[1], e[0])
    };
    // a zero eigenvalue computed as a rounding-level positive number is still zero
    (lo > T::lit(4.0) * T::default_epsilon(), (lo, hi))
}
