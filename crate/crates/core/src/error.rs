use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Both reciprocal roots sit on (or within tolerance of) the unit circle,
    /// so the eigenstates are not normalizable and no state is distilled.
    #[error("no distillation at this parameter point: {reason}")]
    NoDistillation { reason: String },

    #[error("truncation discards {tail:.3e} of the state norm (limit {limit:.1e}); increase the dimension")]
    TailTooLarge { tail: f64, limit: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix exponential did not converge: {0}")]
    NoConvergence(String),

    #[error("singular denominator in factorization: |1 - (lambda/kappa) tanh kappa| = {0:.3e}")]
    SingularDenominator(f64),

    #[error("no inverse-cosh branch reproduces the factored form (best error {0:.3e})")]
    BranchAmbiguity(f64),

    #[error("quadrature did not converge: doubling nodes changed the result by {change:.3e}")]
    QuadratureNotConverged { change: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),
}
