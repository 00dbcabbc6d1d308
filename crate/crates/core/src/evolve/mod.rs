//! Evaluation of `P^m_γ f(Γ(x,t), t) = (1/2π)∫ e^{i(Γ(x,t)ξ + t|ξ|^m)} D(t,ξ) f̂(ξ) dξ`.
//!
//! A [`PropagationPlan`] synthesises whole time slices by inverse FFT and
//! interpolates them along a curve; [`direct_quadrature`] evaluates single
//! points and serves as the reference. Both are exposed as [`Propagator`]
//! strategies.

mod field;
mod params;
mod plan;
mod propagator;
mod quadrature;

pub use field::SampledField;
pub use params::EvolutionParams;
pub use plan::{PlanConfig, PropagationPlan};
pub use propagator::{
    evaluate_along_curve, propagators, AutoPropagator, Propagator, QuadraturePropagator, TransformPropagator,
    TRANSFORM_THRESHOLD,
};
pub use quadrature::{direct_quadrature, max_phase_rate};
pub(crate) use quadrature::oscillatory_sum;
