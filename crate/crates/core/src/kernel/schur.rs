use rayon::prelude::*;
use serde::Serialize;

use super::bound::{beta_table, BetaChoice};
use super::cutoff::CutoffSpec;
use super::eval::KernelPlan;
use crate::domain::CurveSpec;
use crate::error::{LabError, Result};
use crate::evolve::EvolutionParams;
use crate::maximal::{fit_slope, ExponentFit};
use crate::summation::trapezoid;

/// `I(x) = ∫_{[−1,1]} |K(x, y, t(x), t(y))| dy` by the trapezoid rule on `ys`.
pub fn schur_integral(x: f64, plan: &KernelPlan, t_of: &(dyn Fn(f64) -> f64 + Sync), ys: &[f64]) -> Result<f64> {
    if ys.len() < 2 || ys.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(LabError::invalid("ys", "need at least two increasing nodes"));
    }
    let tx = t_of(x);
    let values = ys
        .par_iter()
        .map(|&y| Ok(plan.eval(x, y, tx, t_of(y))?.norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(ys, &values))
}

/// Uniform grid on `[−1, 1]` with spacing `1/(4λ)` (rounded up to a power of two count).
pub fn schur_grid(lambda: f64) -> Vec<f64> {
    let cells = ((8.0 * lambda).ceil() as usize).next_power_of_two();
    let h = 2.0 / cells as f64;
    (0..=cells).map(|k| -1.0 + k as f64 * h).collect()
}

/// `t(x) = min(1, |x|^{1/α})`.
pub fn structured_assignment(alpha: f64) -> impl Fn(f64) -> f64 + Sync + Send + Copy {
    move |x: f64| x.abs().powf(1.0 / alpha).min(1.0)
}

/// Row-integral scaling under the structured assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurSweep {
    pub alpha: f64,
    pub gamma: f64,
    pub beta: BetaChoice,
    /// `(λ, max over the probe points of I(x))`.
    pub points: Vec<(f64, f64)>,
    pub fit: ExponentFit,
    pub tolerance: f64,
    pub pass: bool,
}

/// Default probe points for `sup_x I(x)`.
pub const SCHUR_PROBES: [f64; 3] = [0.0, 0.25, 0.5];

/// Fits `log max_x I(x)` against `log λ` for the Hölder-tangent curve and the
/// structured assignment; passes when the slope is at most the table exponent
/// plus `tolerance`.
pub fn schur_sweep(
    alpha: f64,
    gamma: f64,
    lambdas: &[f64],
    probes: &[f64],
    cutoff: CutoffSpec,
    tolerance: f64,
) -> Result<SchurSweep> {
    let beta = beta_table(alpha, gamma)?;
    let curve = CurveSpec::holder_tangent(alpha)?;
    let params = EvolutionParams::schrodinger(gamma)?;
    let t_of = structured_assignment(alpha);
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let plan = KernelPlan::new(lambda, params, curve.clone(), cutoff)?;
        let ys = schur_grid(lambda);
        let mut best = 0.0f64;
        for &x in probes {
            best = best.max(schur_integral(x, &plan, &t_of, &ys)?);
        }
        points.push((lambda, best));
    }
    let fit = fit_slope(&points)?;
    let pass = fit.slope <= beta.predicted_i_exponent + tolerance;
    Ok(SchurSweep {
        alpha,
        gamma,
        beta,
        points,
        fit,
        tolerance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = schur_grid(16.0);
        assert_eq!(g.len(), 129);
        assert_eq!(g[0], -1.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.contains(&0.0) && g.contains(&0.25) && g.contains(&0.5));
    }

    #[test]
    fn structured_times() {
        let t = structured_assignment(0.5);
        assert_eq!(t(0.0), 0.0);
        assert!((t(-0.5) - 0.25).abs() < 1e-15);
        assert_eq!(t(1.0), 1.0);
    }

    #[test]
    fn time_zero_identity_is_finite_and_below_modulus_bound() {
        let plan = KernelPlan::new(
            16.0,
            EvolutionParams::schrodinger(1.0).unwrap(),
            CurveSpec::identity(),
            CutoffSpec::default(),
        )
        .unwrap();
        let ys = schur_grid(16.0);
        let i = schur_integral(0.1, &plan, &|_| 0.0, &ys).unwrap();
        assert!(i.is_finite() && i > 0.0);
        assert!(i <= 2.0 * plan.modulus_bound());
    }
}
