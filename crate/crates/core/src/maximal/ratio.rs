use serde::{Deserialize, Serialize};

use super::field::{l2_norm_field, maximal_field};
use super::timegrid::{build_time_grid, TimeGridSpec};
use crate::domain::{sobolev_norm, CounterexampleFamily, CurveSpec, Interval, SpectralFunction, DEFAULT_SAMPLES};
use crate::error::{LabError, Result};
use crate::evolve::{propagators, EvolutionParams, PlanConfig, PropagationPlan};

/// Discretisation used when measuring `Q(R)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QConfig {
    /// Nodes of `f̂_R` across its support.
    pub n_samples: usize,
    /// Uniform positions per unit of `λ` over `[−1, 1]`.
    pub x_per_lambda: f64,
    pub min_x_nodes: usize,
    /// Extra positions inside the witness set.
    pub set_nodes: usize,
    /// Time grid; `None` uses [`TimeGridSpec::for_lambda`].
    pub time: Option<TimeGridSpec>,
    pub plan: PlanConfig,
    /// Name of the propagation strategy.
    pub propagator: String,
}

impl Default for QConfig {
    fn default() -> Self {
        Self {
            n_samples: DEFAULT_SAMPLES,
            x_per_lambda: 8.0,
            min_x_nodes: 64,
            set_nodes: 256,
            time: None,
            plan: PlanConfig::default(),
            propagator: "auto".into(),
        }
    }
}

/// One evaluation of `Q(R) = ‖M‖_{L²([−1,1])} / ‖f_R‖_{H^s}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QMeasurement {
    pub family: CounterexampleFamily,
    pub lambda: f64,
    pub s_order: f64,
    pub q: f64,
    pub norm_maxfield: f64,
    pub norm_f_l2: f64,
    pub norm_f_hs: f64,
    pub n_x: usize,
    pub n_t: usize,
}

/// Uniform positions on `[−1, 1]` merged with `set_nodes` points inside `set`.
pub fn x_grid(lambda: f64, set: Option<Interval>, cfg: &QConfig) -> Vec<f64> {
    let n = ((cfg.x_per_lambda * lambda).ceil() as usize).max(cfg.min_x_nodes).max(1);
    let mut xs: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
    if let Some(set) = set {
        xs.extend(set.interior_nodes(cfg.set_nodes).into_iter().filter(|x| (-1.0..=1.0).contains(x)));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
    }
    xs
}

/// `‖M‖_{L²([−1,1])}` and `‖f‖_{H^s}` for an arbitrary spectrum.
pub fn maximal_ratio(
    f: SpectralFunction,
    params: EvolutionParams,
    curve: &CurveSpec,
    s: f64,
    xs: &[f64],
    tgrid: &super::TimeGrid,
    cfg: &QConfig,
) -> Result<(f64, f64)> {
    let hs = sobolev_norm(&f, s);
    if !(hs > 0.0) {
        return Err(LabError::ZeroNorm("‖f‖_{H^s} vanishes, so Q is undefined".into()));
    }
    let propagator = propagators().get(&cfg.propagator)?;
    let plan = PropagationPlan::new(f, params, curve, cfg.plan)?;
    let field = maximal_field(&plan, curve, xs, tgrid, propagator.as_ref())?;
    let norm = l2_norm_field(&field, Interval { lo: -1.0, hi: 1.0 })?;
    Ok((norm, hs))
}

/// `Q(R)` for a counterexample member along `Γ(x,t) = x − t^α` with `m = 2`
/// and damping on.
pub fn ratio_q(fam: &CounterexampleFamily, s: f64, cfg: &QConfig) -> Result<QMeasurement> {
    let params = EvolutionParams::schrodinger(fam.gamma)?;
    let curve = CurveSpec::holder_tangent(fam.alpha)?;
    ratio_q_with(fam, params, &curve, s, cfg)
}

/// `Q(R)` with explicit evolution parameters and curve.
pub fn ratio_q_with(
    fam: &CounterexampleFamily,
    params: EvolutionParams,
    curve: &CurveSpec,
    s: f64,
    cfg: &QConfig,
) -> Result<QMeasurement> {
    let set = fam.sets_ab()?;
    let lambda = fam.lambda();
    let f = fam.spectrum(cfg.n_samples)?;
    let l2 = f.l2_norm();
    let xs = x_grid(lambda, Some(set), cfg);
    let spec = cfg.time.unwrap_or_else(|| TimeGridSpec::for_lambda(lambda));
    let tgrid = build_time_grid(spec, Some(fam), &xs)?;
    let (norm, hs) = maximal_ratio(f, params, curve, s, &xs, &tgrid, cfg)?;
    Ok(QMeasurement {
        family: *fam,
        lambda,
        s_order: s,
        q: norm / hs,
        norm_maxfield: norm,
        norm_f_l2: l2,
        norm_f_hs: hs,
        n_x: xs.len(),
        n_t: tgrid.len(),
    })
}
