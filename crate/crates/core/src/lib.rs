//! Numerical laboratory for the complex-time (and fractional) Schrödinger
//! operator evaluated along Hölder curves.
//!
//! The crate is organised as:
//!
//! * [`domain`]: spectral inputs, bump profiles, curve families, Sobolev
//!   norms and the two counterexample families.
//! * [`evolve`]: evaluation of `P^m_γ f(Γ(x,t), t)` through a transform path
//!   and a direct-quadrature oracle, behind the [`evolve::Propagator`] trait.
//! * [`maximal`]: maximal fields over time grids, L² norms, the ratio `Q(R)`
//!   and log-log slope fits.
//! * [`kernel`]: the TT* kernel, its pointwise majorant with the (β₁, β₂)
//!   table, and Schur row integrals.
//! * [`atlas`]: the sharp Sobolev exponent `s(α, γ, m)` as a registry of
//!   theorem strategies with an exact rational evaluation path.

pub mod atlas;
pub mod domain;
pub mod error;
pub mod evolve;
pub mod kernel;
pub mod maximal;
pub mod registry;
pub mod summation;

pub use error::{LabError, Result};

/// Version string stamped into run records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
