use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::cutoff::CutoffSpec;
use crate::domain::{CurveSpec, SpectralFunction};
use crate::error::{LabError, Result};
use crate::evolve::{oscillatory_sum, EvolutionParams};

/// Base grid spacing of the cutoff spectrum is `λ/BASE_NODES_PER_LAMBDA`.
const BASE_NODES_PER_LAMBDA: usize = 256;

/// One evaluation of the kernel together with its majorant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSample {
    pub x: f64,
    pub y: f64,
    pub t1: f64,
    pub t2: f64,
    pub lambda: f64,
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    pub bound: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl KernelSample {
    pub fn ratio(&self) -> f64 {
        self.value.norm() / self.bound
    }
}

/// The kernel at a fixed frequency level, with the sampled cutoff cached.
#[derive(Debug, Clone)]
pub struct KernelPlan {
    lambda: f64,
    params: EvolutionParams,
    curve: CurveSpec,
    cutoff: CutoffSpec,
    spectrum: SpectralFunction,
}

impl KernelPlan {
    pub fn new(lambda: f64, params: EvolutionParams, curve: CurveSpec, cutoff: CutoffSpec) -> Result<Self> {
        if !(lambda >= 4.0 && lambda.is_finite()) {
            return Err(LabError::invalid("lambda", format!("need λ ≥ 4, got {lambda}")));
        }
        params.validate()?;
        let outer = cutoff.outer * lambda;
        let n = 2 * (cutoff.outer.ceil() as usize) * BASE_NODES_PER_LAMBDA + 1;
        let spectrum = SpectralFunction::from_profile(Arc::new(cutoff.scaled(lambda)), -outer, outer, n, None)?;
        Ok(Self {
            lambda,
            params,
            curve,
            cutoff,
            spectrum,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn params(&self) -> &EvolutionParams {
        &self.params
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    /// `λ·∫Ψ`, the trivial modulus bound.
    pub fn modulus_bound(&self) -> f64 {
        self.lambda * self.cutoff.integral()
    }

    /// `∫ e^{i((Γ(x,t1)−Γ(y,t2))ξ + (t1−t2)|ξ|^m)}·e^{−(D(t1)+D(t2))|ξ|^m}·Ψ(ξ/λ) dξ`.
    pub fn eval(&self, x: f64, y: f64, t1: f64, t2: f64) -> Result<Complex64> {
        for t in [t1, t2] {
            if !(0.0..=1.0).contains(&t) {
                return Err(LabError::invalid("t", format!("must lie in [0, 1], got {t}")));
            }
        }
        let shift = self.curve.eval(x, t1)? - self.curve.eval(y, t2)?;
        let delta = self.params.damping_rate(t1) + self.params.damping_rate(t2);
        Ok(oscillatory_sum(&self.spectrum, self.params.m, shift, t1 - t2, delta) * (2.0 * PI))
    }
}

/// Single kernel evaluation; prefer [`KernelPlan`] for repeated use.
#[allow(clippy::too_many_arguments)]
pub fn kernel_eval(
    x: f64,
    y: f64,
    t1: f64,
    t2: f64,
    lambda: f64,
    params: &EvolutionParams,
    curve: &CurveSpec,
    cutoff: &CutoffSpec,
) -> Result<Complex64> {
    KernelPlan::new(lambda, *params, curve.clone(), *cutoff)?.eval(x, y, t1, t2)
}
