use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bound::{beta_table, bound_rhs, BetaChoice};
use super::cutoff::CutoffSpec;
use super::eval::{KernelPlan, KernelSample};
use crate::domain::CurveSpec;
use crate::error::{LabError, Result};
use crate::evolve::EvolutionParams;

pub const MIN_SAMPLE_COUNT: usize = 100;

/// Allowed growth of the maximal ratio from the smallest to the largest λ.
pub const GROWTH_LIMIT: f64 = 2.0;

/// Seeded random sweep of `|K| / bound_rhs` over a list of frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCheckSpec {
    pub alpha: f64,
    pub gamma: f64,
    pub lambdas: Vec<f64>,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub cutoff: CutoffSpec,
}

impl KernelCheckSpec {
    pub fn new(alpha: f64, gamma: f64, lambdas: Vec<f64>, count: usize, seed: u64) -> Self {
        Self {
            alpha,
            gamma,
            lambdas,
            count,
            seed,
            cutoff: CutoffSpec::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.count < MIN_SAMPLE_COUNT {
            return Err(LabError::invalid(
                "count",
                format!("need at least {MIN_SAMPLE_COUNT} samples per λ, got {}", self.count),
            ));
        }
        if self.lambdas.is_empty() {
            return Err(LabError::invalid("lambdas", "empty frequency list"));
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(**l >= 4.0 && l.is_finite())) {
            return Err(LabError::invalid("lambdas", format!("need λ ≥ 4, got {l}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaRatio {
    pub lambda: f64,
    pub max_ratio: f64,
    pub worst: KernelSample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelBoundReport {
    pub spec: KernelCheckSpec,
    pub beta: BetaChoice,
    pub per_lambda: Vec<LambdaRatio>,
    /// Max ratio at the last λ over the max ratio at the first.
    pub growth: f64,
    pub pass: bool,
}

/// Times `{0} ∪ {2^{−j} : j = 0..2log₂λ}`.
pub fn time_set(lambda: f64) -> Vec<f64> {
    let jmax = (2.0 * lambda.log2()).round().max(0.0) as i32;
    std::iter::once(0.0).chain((0..=jmax).map(|j| 2f64.powi(-j))).collect()
}

/// Stratified draws of `(x, y, t1, t2)`: every time pair of `times²` is visited
/// equally often (in seeded order), and the visits to one pair split
/// `ln|x − y| ∈ [−4 ln λ, ln 2]` into equal strata, one jittered draw each.
fn stratified_draws<R: Rng>(rng: &mut R, lambda: f64, times: &[f64], count: usize) -> Vec<(f64, f64, f64, f64)> {
    let n_t = times.len();
    let mut pairs: Vec<usize> = (0..n_t * n_t).collect();
    pairs.shuffle(rng);
    let mut visits = vec![0usize; pairs.len()];
    for i in 0..count {
        visits[pairs[i % pairs.len()]] += 1;
    }
    let mut seen = vec![0usize; pairs.len()];
    let lo = -4.0 * lambda.ln();
    let hi = 2f64.ln();
    (0..count)
        .map(|i| {
            let p = pairs[i % pairs.len()];
            let k = seen[p];
            seen[p] += 1;
            let u: f64 = rng.gen();
            let d = (lo + (hi - lo) * (k as f64 + u) / visits[p] as f64).exp().min(2.0 * (1.0 - f64::EPSILON));
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            // y = x − sign·d stays in [−1, 1]
            let (xa, xb) = if sign > 0.0 { (-1.0 + d, 1.0) } else { (-1.0, 1.0 - d) };
            let x = (xa + (xb - xa) * rng.gen::<f64>()).clamp(-1.0, 1.0);
            let y = (x - sign * d).clamp(-1.0, 1.0);
            (x, y, times[p / n_t], times[p % n_t])
        })
        .collect()
}

/// Number of leading draws refined by [`polish`].
const POLISHED: usize = 8;

/// Local maximisation of the ratio over `ln|x − y|` at fixed `x`, `t1`, `t2`:
/// a uniform scan over one e-fold either side followed by golden-section
/// search around the best scan node.
fn polish(sample: &(dyn Fn(f64, f64, f64, f64) -> Result<KernelSample> + Sync), start: &KernelSample) -> Result<KernelSample> {
    let (x, t1, t2) = (start.x, start.t1, start.t2);
    let sign = (x - start.y).signum();
    // feasible |x − y| keeps y = x − sign·d inside [−1, 1]
    let d_max = if sign > 0.0 { x + 1.0 } else { 1.0 - x };
    let d_min = start.lambda.powi(-4);
    let s0 = (x - start.y).abs().ln();
    let (lo, hi) = ((s0 - 1.0).max(d_min.ln()), (s0 + 1.0).min(d_max.ln()));
    let at = |s: f64| sample(x, x - sign * s.exp(), t1, t2);
    let mut best = *start;
    if !(lo < hi) {
        return Ok(best);
    }
    let n = 64;
    let h = (hi - lo) / n as f64;
    let mut best_s = s0;
    for k in 0..=n {
        let s = lo + k as f64 * h;
        let c = at(s)?;
        if c.ratio() > best.ratio() {
            best = c;
            best_s = s;
        }
    }
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = ((best_s - h).max(lo), (best_s + h).min(hi));
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (at(c)?, at(d)?);
    for _ in 0..40 {
        if fc.ratio() > fd.ratio() {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = at(d)?;
        }
    }
    for cand in [fc, fd] {
        if cand.ratio() > best.ratio() {
            best = cand;
        }
    }
    Ok(best)
}

/// Maximal `|K| / bound_rhs` per λ for the Hölder-tangent curve with the
/// table's (β₁, β₂). Draws are generated sequentially from the seed and then
/// evaluated in parallel; the leading draws are refined locally.
pub fn verify_kernel_bound(spec: &KernelCheckSpec) -> Result<KernelBoundReport> {
    spec.validate()?;
    let beta = beta_table(spec.alpha, spec.gamma)?;
    let curve = CurveSpec::holder_tangent(spec.alpha)?;
    let params = EvolutionParams::schrodinger(spec.gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut per_lambda = Vec::with_capacity(spec.lambdas.len());
    for &lambda in &spec.lambdas {
        let times = time_set(lambda);
        let draws = stratified_draws(&mut rng, lambda, &times, spec.count);
        let plan = KernelPlan::new(lambda, params, curve.clone(), spec.cutoff)?;
        let sample = |x: f64, y: f64, t1: f64, t2: f64| -> Result<KernelSample> {
            Ok(KernelSample {
                x,
                y,
                t1,
                t2,
                lambda,
                value: plan.eval(x, y, t1, t2)?,
                bound: bound_rhs(x, y, lambda, &beta, spec.alpha, spec.gamma)?,
            })
        };
        let mut samples = draws
            .par_iter()
            .map(|&(x, y, t1, t2)| sample(x, y, t1, t2))
            .collect::<Result<Vec<_>>>()?;
        // stable order: ratio descending, then draw index
        let mut order: Vec<usize> = (0..samples.len()).collect();
        order.sort_by(|&a, &b| samples[b].ratio().total_cmp(&samples[a].ratio()).then(a.cmp(&b)));
        let polished = order[..POLISHED.min(order.len())]
            .par_iter()
            .map(|&i| polish(&sample, &samples[i]))
            .collect::<Result<Vec<_>>>()?;
        samples.extend(polished);
        // first maximum in draw order
        let worst = samples
            .iter()
            .copied()
            .reduce(|a, b| if b.ratio() > a.ratio() { b } else { a })
            .expect("count ≥ 100");
        per_lambda.push(LambdaRatio {
            lambda,
            max_ratio: worst.ratio(),
            worst,
        });
    }
    let growth = per_lambda.last().unwrap().max_ratio / per_lambda[0].max_ratio;
    Ok(KernelBoundReport {
        spec: spec.clone(),
        beta,
        per_lambda,
        growth,
        pass: growth <= GROWTH_LIMIT,
    })
}

/// `max |K(u/λ, 0, 0, 0)|·u²/λ` over `u ∈ [u0, u0 + 2π]`: the constant of the
/// non-stationary decay `|K| ≤ C·λ·(λ|x−y|)^{−2}` measured at `λ|x−y| = u0`.
pub fn decay_constant(plan: &KernelPlan, u0: f64) -> Result<f64> {
    let lambda = plan.lambda();
    let n = 256;
    let mut best = 0.0f64;
    for k in 0..=n {
        let u = u0 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let v = plan.eval(u / lambda, 0.0, 0.0, 0.0)?.norm() * u * u / lambda;
        best = best.max(v);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_set_shape() {
        let t = time_set(16.0);
        assert_eq!(t.len(), 10);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 1.0);
        assert_eq!(*t.last().unwrap(), 2f64.powi(-8));
    }

    #[test]
    fn draws_respect_the_separation_floor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let times = time_set(64.0);
        let draws = stratified_draws(&mut rng, 64.0, &times, 2000);
        for &(x, y, t1, t2) in &draws {
            assert!(x != y && (x - y).abs() >= 64f64.powi(-4) * (1.0 - 1e-9));
            assert!((-1.0..=1.0).contains(&x));
            assert!((-1.0..=1.0).contains(&y));
            assert!(times.contains(&t1) && times.contains(&t2));
        }
        // every time pair is visited
        for &a in &times {
            for &b in &times {
                assert!(draws.iter().any(|d| d.2 == a && d.3 == b));
            }
        }
    }

    #[test]
    fn rejects_small_counts() {
        let spec = KernelCheckSpec::new(0.5, 2.0, vec![16.0], 10, 0);
        assert!(verify_kernel_bound(&spec).is_err());
    }
}
