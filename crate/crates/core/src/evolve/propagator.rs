use std::sync::Arc;

use num_complex::Complex64;

use super::plan::PropagationPlan;
use super::quadrature::direct_quadrature;
use crate::domain::CurveSpec;
use crate::error::Result;
use crate::registry::{Named, Registry};

/// Queries per slice above which [`AutoPropagator`] synthesises the slice.
pub const TRANSFORM_THRESHOLD: usize = 32;

/// A way of evaluating `P f(Γ(x, t), t)` for a batch of positions at one time.
pub trait Propagator: Named + Send + Sync {
    fn along_curve(&self, plan: &PropagationPlan, curve: &CurveSpec, t: f64, xs: &[f64]) -> Result<Vec<Complex64>>;
}

/// One transform per slice, then local interpolation at every query.
#[derive(Debug, Default, Clone, Copy)]
pub struct TransformPropagator;

impl Named for TransformPropagator {
    fn name(&self) -> &str {
        "transform"
    }
}

impl Propagator for TransformPropagator {
    fn along_curve(&self, plan: &PropagationPlan, curve: &CurveSpec, t: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
        let slice = plan.propagate_slice(t)?;
        xs.iter()
            .map(|&x| slice.interpolate(curve.eval(x, t)?))
            .collect()
    }
}

/// Direct quadrature at every query.
#[derive(Debug, Default, Clone, Copy)]
pub struct QuadraturePropagator;

impl Named for QuadraturePropagator {
    fn name(&self) -> &str {
        "quadrature"
    }
}

impl Propagator for QuadraturePropagator {
    fn along_curve(&self, plan: &PropagationPlan, curve: &CurveSpec, t: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
        if !(0.0..=1.0).contains(&t) {
            return Err(crate::LabError::invalid("t", format!("must lie in [0, 1], got {t}")));
        }
        xs.iter()
            .map(|&x| Ok(direct_quadrature(plan.source(), plan.params(), curve.eval(x, t)?, t)))
            .collect()
    }
}

/// Transform above [`TRANSFORM_THRESHOLD`] queries, quadrature otherwise.
#[derive(Debug, Clone, Copy)]
pub struct AutoPropagator {
    pub threshold: usize,
}

impl Default for AutoPropagator {
    fn default() -> Self {
        Self {
            threshold: TRANSFORM_THRESHOLD,
        }
    }
}

impl Named for AutoPropagator {
    fn name(&self) -> &str {
        "auto"
    }
}

impl Propagator for AutoPropagator {
    fn along_curve(&self, plan: &PropagationPlan, curve: &CurveSpec, t: f64, xs: &[f64]) -> Result<Vec<Complex64>> {
        if xs.len() > self.threshold {
            TransformPropagator.along_curve(plan, curve, t, xs)
        } else {
            QuadraturePropagator.along_curve(plan, curve, t, xs)
        }
    }
}

/// Registry with the built-in strategies: `transform`, `quadrature`, `auto`.
pub fn propagators() -> Registry<dyn Propagator> {
    let mut r: Registry<dyn Propagator> = Registry::new("propagator");
    r.register(Arc::new(TransformPropagator))
        .register(Arc::new(QuadraturePropagator))
        .register(Arc::new(AutoPropagator::default()));
    r
}

/// `h_t(Γ(x, t))` by synthesising the slice and interpolating.
pub fn evaluate_along_curve(plan: &PropagationPlan, curve: &CurveSpec, x: f64, t: f64) -> Result<Complex64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(crate::LabError::invalid("x", format!("must lie in [−1, 1], got {x}")));
    }
    let slice = plan.propagate_slice(t)?;
    slice.interpolate(curve.eval(x, t)?)
}
