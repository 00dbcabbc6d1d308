use std::time::Instant;

use ctlab_core::atlas::{self, breakpoints_exact, exponent_exact, predicted_q_slope, Scalar};
use ctlab_core::domain::{CounterexampleFamily, CounterexampleKind, CurveSpec, SpectralFunction, DEFAULT_SAMPLES};
use ctlab_core::evolve::{propagators, EvolutionParams, PropagationPlan};
use ctlab_core::kernel::{schur_sweep, verify_kernel_bound, CutoffSpec, KernelCheckSpec, GROWTH_LIMIT, SCHUR_PROBES};
use ctlab_core::maximal::{
    calibrate, fit_slope, ratio_q, witness_minimum, QConfig, Witness, MIN_WITNESS_NODES, WITNESS_BOUND,
};
use ctlab_core::LabError;
use serde_json::{json, Value};

use crate::config::{Command, ConfigError, Number, RunConfig};
use crate::record::{fmt_f64, RunRecord, Table, Verdict};

pub const DEFAULT_SWEEP_TOLERANCE: f64 = 0.1;
pub const DEFAULT_SCHUR_TOLERANCE: f64 = 0.15;
pub const DEFAULT_C: f64 = 0.01;
pub const DEFAULT_KERNEL_COUNT: usize = 500;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Internal(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Internal(e) => write!(f, "internal error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

/// Input-shaped library errors are configuration errors; the rest are internal.
fn classify(field: &'static str) -> impl Fn(LabError) -> RunError {
    move |e| match e {
        LabError::InvalidInput { field: f, reason } => RunError::Config(ConfigError::new(f, reason)),
        LabError::Regime(_)
        | LabError::OutOfTable { .. }
        | LabError::UnknownStrategy { .. }
        | LabError::Support(_)
        | LabError::Domain(_)
        | LabError::DegenerateSeries(_) => RunError::Config(ConfigError::new(field, e.to_string())),
        other => RunError::Internal(other.to_string()),
    }
}

type Run<T> = std::result::Result<T, RunError>;

fn num(value: &Option<Number>, field: &'static str) -> Run<f64> {
    Ok(RunConfig::require(value, field)?.to_f64(field)?)
}

fn kind(cfg: &RunConfig) -> Run<CounterexampleKind> {
    let name = RunConfig::require(&cfg.params.family, "params.family")?;
    name.parse::<CounterexampleKind>()
        .map_err(|_| ConfigError::new("params.family", format!("unknown family `{name}` (expected thm31 or thm32)")).into())
}

fn family(cfg: &RunConfig, r: f64) -> Run<CounterexampleFamily> {
    let k = kind(cfg)?;
    let alpha = num(&cfg.params.alpha, "params.alpha")?;
    let gamma = num(&cfg.params.gamma, "params.gamma")?;
    let b = match k {
        CounterexampleKind::Thm31 => cfg.params.b.unwrap_or(0.0),
        CounterexampleKind::Thm32 => *RunConfig::require(&cfg.params.b, "params.b")?,
    };
    let c = cfg.params.c.unwrap_or(DEFAULT_C);
    let fam = CounterexampleFamily::new(k, alpha, gamma, b, c, r).map_err(classify("params"))?;
    fam.sets_ab().map_err(classify("params"))?;
    Ok(fam)
}

/// Executes a validated configuration.
pub fn run(cfg: &RunConfig) -> Run<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let mut resolved = cfg.clone();
    resolved.out = None;
    let mut record = match cfg.command {
        Command::Atlas => cmd_atlas(&mut resolved)?,
        Command::Sweep => cmd_sweep(&mut resolved)?,
        Command::Lowerbound => cmd_lowerbound(&mut resolved)?,
        Command::Kernelcheck => cmd_kernelcheck(&mut resolved)?,
        Command::Eval => cmd_eval(&mut resolved)?,
    };
    record.config = resolved;
    record.pass = record.errors.is_empty() && record.verdicts.iter().all(|v| v.pass);
    record.wall_time_s = start.elapsed().as_secs_f64();
    Ok(record)
}

fn blank(command: Command) -> RunRecord {
    RunRecord {
        version: ctlab_core::VERSION.to_string(),
        command,
        config: RunConfig::new(command),
        measurements: Value::Null,
        predictions: Value::Null,
        verdicts: Vec::new(),
        errors: Vec::new(),
        pass: false,
        wall_time_s: 0.0,
        table: Table::default(),
    }
}

pub fn cmd_atlas(cfg: &mut RunConfig) -> Run<RunRecord> {
    let alpha = RunConfig::require(&cfg.params.alpha, "params.alpha")?.clone();
    let m = cfg.params.m.get_or_insert(Number::Float(2.0)).clone();
    if cfg.gammas.is_empty() {
        cfg.gammas.push(RunConfig::require(&cfg.params.gamma, "params.gamma")?.clone());
    }
    let (ra, rm) = (alpha.to_rational("params.alpha")?, m.to_rational("params.m")?);
    let mut record = blank(Command::Atlas);
    record.table.header = vec!["alpha", "gamma", "m", "s", "theorem", "regime"];
    let mut rows = Vec::new();
    for g in &cfg.gammas {
        let rg = g.to_rational("gammas")?;
        let e = exponent_exact(&ra, &rg, &rm).map_err(classify("params"))?;
        record.table.rows.push(vec![
            fmt_f64(ra.to_f64()),
            fmt_f64(rg.to_f64()),
            fmt_f64(rm.to_f64()),
            fmt_f64(e.s.to_f64()),
            e.theorem.clone(),
            e.regime.clone(),
        ]);
        rows.push(json!({
            "alpha": ra.to_f64(), "gamma": rg.to_f64(), "m": rm.to_f64(),
            "s": e.s.to_f64(), "s_exact": e.s.to_string(),
            "theorem": e.theorem, "regime": e.regime, "endpoint_open": true,
        }));
    }
    let bps: Vec<Value> = breakpoints_exact(&ra, &rm)
        .map_err(classify("params"))?
        .into_iter()
        .map(|b| {
            json!({
                "gamma": b.gamma.to_f64(), "gamma_exact": b.gamma.to_string(),
                "left": b.left.to_string(), "right": b.right.to_string(),
                "left_regime": b.left_regime, "right_regime": b.right_regime,
            })
        })
        .collect();
    let mut measurements = json!({ "rows": rows });
    record.predictions = json!({ "breakpoints": bps });
    if cfg.continuity {
        let c = atlas::continuity_check(ra.to_f64(), rm.to_f64()).map_err(classify("params"))?;
        record
            .verdicts
            .push(Verdict::at_most("continuity_gap", c.max_gap, 0.0, atlas::CONTINUITY_TOLERANCE));
        measurements["continuity"] = serde_json::to_value(&c).expect("serializable");
    }
    record.measurements = measurements;
    Ok(record)
}

pub fn cmd_sweep(cfg: &mut RunConfig) -> Run<RunRecord> {
    if cfg.scales.len() < 4 {
        return Err(ConfigError::new("scales", "a sweep needs at least four R values").into());
    }
    let tol = *cfg.tolerance.get_or_insert(DEFAULT_SWEEP_TOLERANCE);
    let s = *cfg.params.s.get_or_insert(0.0);
    cfg.params.c.get_or_insert(DEFAULT_C);
    let grid = cfg.grid.get_or_insert_with(QConfig::default).clone();
    let base = family(cfg, cfg.scales[0])?;
    let predicted = predicted_q_slope(&base).map_err(classify("params"))?;

    let mut record = blank(Command::Sweep);
    let mut points = Vec::new();
    let mut measured = Vec::new();
    for &r in &cfg.scales {
        let fam = base.with_r(r).map_err(classify("scales"))?;
        match ratio_q(&fam, s, &grid) {
            Ok(q) => {
                points.push((r, q.q));
                measured.push(Ok(q));
            }
            Err(e) => {
                record.errors.push(format!("R = {r}: {e}"));
                measured.push(Err((r, fam.lambda(), e.to_string())));
            }
        }
    }
    let fit = if points.len() == cfg.scales.len() {
        match fit_slope(&points) {
            Ok(f) => Some(f),
            Err(e) => {
                record.errors.push(format!("fit: {e}"));
                None
            }
        }
    } else {
        None
    };
    let slope = fit.as_ref().map_or(f64::NAN, |f| f.slope);
    let verdict = Verdict::within("q_slope", slope, predicted, tol);
    let tag = if record.errors.is_empty() && verdict.pass { "pass" } else { "fail" };
    record.table.header = vec![
        "family", "alpha", "gamma", "m", "b", "c", "s_order", "R", "lambda", "Q", "norm_maxfield", "norm_f_l2",
        "norm_f_hs", "slope", "predicted_slope", "verdict",
    ];
    let mut json_rows = Vec::new();
    for m in &measured {
        let head = |r: f64| {
            vec![
                base.kind.to_string(),
                fmt_f64(base.alpha),
                fmt_f64(base.gamma),
                fmt_f64(2.0),
                fmt_f64(base.b),
                fmt_f64(base.c),
                fmt_f64(s),
                fmt_f64(r),
            ]
        };
        match m {
            Ok(q) => {
                let mut row = head(q.family.r);
                row.extend([q.lambda, q.q, q.norm_maxfield, q.norm_f_l2, q.norm_f_hs, slope, predicted].map(fmt_f64));
                row.push(tag.to_string());
                record.table.rows.push(row);
                json_rows.push(serde_json::to_value(q).expect("serializable"));
            }
            Err((r, lambda, e)) => {
                let mut row = head(*r);
                row.push(fmt_f64(*lambda));
                row.extend(std::iter::repeat_n(String::new(), 4));
                row.extend([slope, predicted].map(fmt_f64));
                row.push("error".to_string());
                record.table.rows.push(row);
                json_rows.push(json!({ "R": r, "lambda": lambda, "error": e }));
            }
        }
    }
    record.measurements = json!({ "points": json_rows, "fit": fit });
    record.predictions = json!({ "q_slope": predicted });
    record.verdicts.push(verdict);
    Ok(record)
}

pub fn cmd_lowerbound(cfg: &mut RunConfig) -> Run<RunRecord> {
    if cfg.scales.len() != 1 {
        return Err(ConfigError::new("scales", "lowerbound takes exactly one R").into());
    }
    cfg.params.c.get_or_insert(DEFAULT_C);
    let nodes = *cfg.nodes.get_or_insert(MIN_WITNESS_NODES);
    let witness_name = cfg.witness.get_or_insert_with(|| "selector".into()).clone();
    let witness = match witness_name.as_str() {
        "selector" => Witness::Selector,
        "time_zero" => Witness::TimeZero,
        other => {
            return Err(
                ConfigError::new("witness", format!("unknown witness `{other}` (expected selector or time_zero)")).into()
            )
        }
    };
    let amplitude = cfg.amplitude.unwrap_or(1.0);
    if cfg.calibrate && (amplitude != 1.0 || witness != Witness::Selector) {
        return Err(ConfigError::new("calibrate", "calibration uses the selector witness on the unscaled family").into());
    }
    let fam = family(cfg, cfg.scales[0])?;
    let report = if cfg.calibrate {
        let (fam, report) = calibrate(&fam, nodes).map_err(classify("calibrate"))?;
        cfg.params.c = Some(fam.c);
        cfg.calibrate = false;
        report
    } else {
        let f = fam.spectrum(DEFAULT_SAMPLES).map_err(classify("params"))?;
        let f = if amplitude == 1.0 {
            f
        } else {
            let samples = f.map_samples(|_, v| v * amplitude);
            SpectralFunction::from_samples(f.xi_min(), f.xi_max(), samples, f.band()).map_err(classify("amplitude"))?
        };
        witness_minimum(&f, &fam, witness, nodes).map_err(classify("nodes"))?
    };
    let mut record = blank(Command::Lowerbound);
    let fam = report.family;
    record.table.header =
        vec!["family", "alpha", "gamma", "b", "c", "R", "n_nodes", "min_value", "argmin_x", "bound", "verdict"];
    let mut row = vec![fam.kind.to_string()];
    row.extend([fam.alpha, fam.gamma, fam.b, fam.c, fam.r].map(fmt_f64));
    row.push(report.n_nodes.to_string());
    row.extend([report.min_value, report.argmin_x, report.bound].map(fmt_f64));
    row.push(if report.pass { "pass" } else { "fail" }.to_string());
    record.table.rows.push(row);
    record.measurements = json!({ "witness": witness_name, "report": report });
    record.predictions = json!({ "bound": WITNESS_BOUND });
    record.verdicts.push(Verdict::at_least("witness_minimum", report.min_value, WITNESS_BOUND));
    Ok(record)
}

pub fn cmd_kernelcheck(cfg: &mut RunConfig) -> Run<RunRecord> {
    let alpha = num(&cfg.params.alpha, "params.alpha")?;
    let gamma = num(&cfg.params.gamma, "params.gamma")?;
    if cfg.scales.is_empty() {
        cfg.scales = vec![16.0, 64.0, 256.0];
    }
    if cfg.schur_scales.is_empty() {
        cfg.schur_scales = vec![16.0, 32.0, 64.0, 128.0];
    }
    let count = *cfg.count.get_or_insert(DEFAULT_KERNEL_COUNT);
    let seed = *cfg.seed.get_or_insert(DEFAULT_SEED);
    let tol = *cfg.tolerance.get_or_insert(DEFAULT_SCHUR_TOLERANCE);
    let spec = KernelCheckSpec::new(alpha, gamma, cfg.scales.clone(), count, seed);
    let bound = verify_kernel_bound(&spec).map_err(classify("params"))?;
    let schur = schur_sweep(alpha, gamma, &cfg.schur_scales, &SCHUR_PROBES, CutoffSpec::default(), tol)
        .map_err(classify("schur_scales"))?;

    let mut record = blank(Command::Kernelcheck);
    let v_bound = Verdict::at_most("ratio_growth", bound.growth, GROWTH_LIMIT, 0.0);
    let v_schur = Verdict::at_most("schur_slope", schur.fit.slope, schur.beta.predicted_i_exponent, tol);
    let tag = if v_bound.pass && v_schur.pass { "pass" } else { "fail" };
    record.table.header = vec!["lambda", "max_ratio", "schur_slope", "predicted_I_exponent", "verdict"];
    for l in &bound.per_lambda {
        let mut row: Vec<String> =
            [l.lambda, l.max_ratio, schur.fit.slope, schur.beta.predicted_i_exponent].map(fmt_f64).to_vec();
        row.push(tag.to_string());
        record.table.rows.push(row);
    }
    record.measurements = json!({ "bound": bound, "schur": schur });
    record.predictions = json!({ "beta": schur.beta, "growth_limit": GROWTH_LIMIT });
    record.verdicts.extend([v_bound, v_schur]);
    Ok(record)
}

pub fn cmd_eval(cfg: &mut RunConfig) -> Run<RunRecord> {
    if cfg.scales.len() != 1 {
        return Err(ConfigError::new("scales", "eval takes exactly one R").into());
    }
    if cfg.xs.is_empty() {
        return Err(ConfigError::new("xs", "at least one position is required").into());
    }
    if cfg.ts.is_empty() {
        return Err(ConfigError::new("ts", "at least one time is required").into());
    }
    cfg.params.c.get_or_insert(DEFAULT_C);
    cfg.params.m.get_or_insert(Number::Float(2.0));
    let m = num(&cfg.params.m, "params.m")?;
    let curve_name = cfg.params.curve.get_or_insert_with(|| "holder_tangent".into()).clone();
    let name = cfg.propagator.get_or_insert_with(|| "auto".into()).clone();
    let fam = family(cfg, cfg.scales[0])?;
    let params = EvolutionParams::new(m, fam.gamma, true).map_err(classify("params.m"))?;
    let curve = CurveSpec::builtin(&curve_name, fam.alpha).map_err(classify("params.curve"))?;
    let f = fam.spectrum(DEFAULT_SAMPLES).map_err(classify("params"))?;
    let prop = propagators().get(&name).map_err(classify("propagator"))?;
    let plan = PropagationPlan::with_defaults(f, params, &curve).map_err(classify("params"))?;

    let mut record = blank(Command::Eval);
    record.table.header = vec!["x", "t", "re", "im", "modulus", "propagator"];
    let mut json_rows = Vec::new();
    for &t in &cfg.ts {
        let values = prop.along_curve(&plan, &curve, t, &cfg.xs).map_err(classify("ts"))?;
        for (&x, v) in cfg.xs.iter().zip(values) {
            let mut row: Vec<String> = [x, t, v.re, v.im, v.norm()].map(fmt_f64).to_vec();
            row.push(name.clone());
            record.table.rows.push(row);
            json_rows.push(json!({ "x": x, "t": t, "re": v.re, "im": v.im, "modulus": v.norm() }));
        }
    }
    record.measurements = json!({ "family": fam, "lambda": fam.lambda(), "values": json_rows });
    Ok(record)
}
