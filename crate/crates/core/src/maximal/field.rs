use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::timegrid::TimeGrid;
use crate::domain::{CurveSpec, Interval};
use crate::error::{LabError, Result};
use crate::evolve::{PropagationPlan, Propagator, QuadraturePropagator};
use crate::summation::{pairwise_sum, trapezoid};

/// Slices whose a-priori bound `(1/2π)∫|f̂|·|D(t,·)|` falls below this
/// fraction of the undamped bound are not evaluated.
pub const NEGLIGIBLE_SLICE: f64 = 1e-16;

/// `M(x) = max_t |P f(Γ(x,t),t)|` on a set of positions, with the time that
/// attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalField {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub argmax_t: Vec<f64>,
}

impl MaximalField {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn offer(&mut self, i: usize, v: f64, t: f64) {
        // earliest time wins ties
        if v > self.values[i] || (v == self.values[i] && t < self.argmax_t[i]) {
            self.values[i] = v;
            self.argmax_t[i] = t;
        }
    }
}

/// A-priori bound `(1/2π)∫|f̂(ξ)|·|D(t,ξ)| dξ ≥ sup_y |h_t(y)|`.
fn slice_bound(plan: &PropagationPlan, t: f64) -> f64 {
    let f = plan.source();
    let p = plan.params();
    let delta = p.damping_rate(t);
    let terms: Vec<f64> = (0..f.len())
        .map(|k| f.weight(k) * f.samples()[k].norm() * (-delta * p.symbol(f.node(k))).exp())
        .collect();
    pairwise_sum(&terms) * f.dxi() / (2.0 * PI)
}

/// Maximal field over all grid times and the per-position extra times.
///
/// Slices are computed in parallel and folded in increasing `t`, so the result
/// does not depend on the schedule. `xs` must be sorted.
pub fn maximal_field(
    plan: &PropagationPlan,
    curve: &CurveSpec,
    xs: &[f64],
    tgrid: &TimeGrid,
    propagator: &dyn Propagator,
) -> Result<MaximalField> {
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LabError::invalid("xs", "positions must be strictly increasing"));
    }
    if tgrid.extra_times.len() != xs.len() {
        return Err(LabError::invalid("extra_times", "need one list of extra times per position"));
    }
    let mut field = MaximalField {
        xs: xs.to_vec(),
        values: vec![f64::NEG_INFINITY; xs.len()],
        argmax_t: vec![f64::INFINITY; xs.len()],
    };
    if xs.is_empty() {
        return Ok(field);
    }

    let floor = NEGLIGIBLE_SLICE * slice_bound(plan, 0.0);
    let live: Vec<f64> = tgrid
        .nodes
        .iter()
        .copied()
        .filter(|&t| t == 0.0 || slice_bound(plan, t) > floor)
        .collect();

    let batch = rayon::current_num_threads().max(1);
    for chunk in live.chunks(batch) {
        let slices: Vec<Vec<f64>> = chunk
            .par_iter()
            .map(|&t| {
                propagator
                    .along_curve(plan, curve, t, xs)
                    .map(|v| v.iter().map(|z| z.norm()).collect())
            })
            .collect::<Result<_>>()?;
        for (&t, mods) in chunk.iter().zip(&slices) {
            for (i, &v) in mods.iter().enumerate() {
                field.offer(i, v, t);
            }
        }
    }

    let extras: Vec<Vec<(f64, f64)>> = xs
        .par_iter()
        .zip(&tgrid.extra_times)
        .map(|(&x, times)| {
            times
                .iter()
                .map(|&t| {
                    let v = QuadraturePropagator.along_curve(plan, curve, t, &[x])?;
                    Ok((t, v[0].norm()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for (i, list) in extras.iter().enumerate() {
        for &(t, v) in list {
            field.offer(i, v, t);
        }
    }
    Ok(field)
}

/// `(∫_I M(x)² dx)^{1/2}` by the trapezoid rule over the nodes inside `I`.
pub fn l2_norm_field(field: &MaximalField, interval: Interval) -> Result<f64> {
    if !(interval.lo >= -1.0 && interval.hi <= 1.0 && interval.lo < interval.hi) {
        return Err(LabError::invalid("interval", "must be a nonempty subinterval of [−1, 1]"));
    }
    let (xs, sq): (Vec<f64>, Vec<f64>) = field
        .xs
        .iter()
        .zip(&field.values)
        .filter(|(&x, _)| x >= interval.lo && x <= interval.hi)
        .map(|(&x, &v)| (x, v * v))
        .unzip();
    if xs.len() < 2 {
        return Ok(0.0);
    }
    Ok(trapezoid(&xs, &sq).sqrt())
}
