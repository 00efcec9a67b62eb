//! Repeated-measurement distillation of a squeezed field mode.
//!
//! A particle prepared in a Gaussian momentum state interacts linearly with
//! one bosonic mode and is projected back onto that Gaussian every `tau`.
//! Conditioned on every projection succeeding, the mode evolves under a
//! non-unitary operator whose spectrum has a unique dominant eigenvalue,
//! so any initial state is driven into a pure squeezed vacuum.
//!
//! * [`analytic`] evaluates the closed-form operator coefficients, the
//!   eigenvalue ladder and the distilled target.
//! * [`fock`] holds truncated Fock-space states and matrix functions.
//! * [`protocol`] builds the projected operator as a matrix and iterates the
//!   measurement sequence.
//! * [`oracle`] holds the independent verification routes.
//!
//! The math is generic over the [`Real`] scalar; the aliases below fix it
//! to `f64`.

// `!(x <= y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod protocol;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Params = analytic::ProtocolParams<f64>;
pub type Scalars = analytic::OperatorScalars<f64>;
pub type Branch = analytic::BranchSolution<f64>;
pub type Spectrum = analytic::Spectrum<f64>;
pub type Target = analytic::SqueezedTarget<f64>;
pub type Matrix = fock::FockMatrix<f64>;
pub type Density = fock::DensityMatrix<f64>;
pub type State = fock::PureState<f64>;
pub type Trace = protocol::SimulationTrace<f64>;
pub type C64 = num_complex::Complex64;
