//! Non-asymptotic small-time tail bounds for Lévy processes whose jump
//! density behaves like an α-stable density near the origin.
//!
//! The crate is organised bottom-up:
//!
//! * [`levy_model`] holds jump densities with their class certificates and
//!   computes the functionals λ_a, λ_{a,b}, σ²(a) and b(a).
//! * [`bounds`] evaluates the explicit tail bounds together with their
//!   validity windows and constants.
//! * [`closed_forms`] gives exact tails for the Cauchy, Gamma, inverse
//!   Gaussian and compound Poisson processes.
//! * [`simulate`] draws increments and small-jump martingales with
//!   reproducible counter-based streams.
//! * [`harness`] builds residual curves, fits rates and checks that bounds
//!   dominate the truth.
//!
//! The analytic layers are generic over the scalar type through [`Real`];
//! the aliases below fix it to `f64`.

pub mod bounds;
pub mod closed_forms;
mod error;
pub mod harness;
pub mod levy_model;
pub mod quadrature;
mod real;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` instantiation of [`levy_model::LevyModel`].
pub type Model = levy_model::LevyModel<f64>;
/// `f64` instantiation of [`levy_model::FunctionalValue`].
pub type Functional = levy_model::FunctionalValue<f64>;
/// `f64` instantiation of [`bounds::BoundResult`].
pub type Bound = bounds::BoundResult<f64>;
/// `f64` instantiation of [`bounds::ConstantsTable`].
pub type Constants = bounds::ConstantsTable<f64>;
/// `f64` instantiation of [`closed_forms::ExactTail`].
pub type Exact = closed_forms::ExactTail<f64>;
