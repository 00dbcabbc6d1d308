use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{CounterexampleFamily, SpectralFunction, DEFAULT_SAMPLES};
use crate::error::{LabError, Result};
use crate::evolve::{direct_quadrature, EvolutionParams};

/// The constant `1/(4π)` below which the witness values must not fall.
pub const WITNESS_BOUND: f64 = 1.0 / (4.0 * PI);

/// Minimum nodes inside the witness set.
pub const MIN_WITNESS_NODES: usize = 256;

/// Smallest `c` tried by [`calibrate`].
pub const MIN_C: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub family: CounterexampleFamily,
    pub n_nodes: usize,
    pub min_value: f64,
    pub argmin_x: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Which witness time to use at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// `t = t_x` from the selector, `x` in the theorem's set.
    Selector,
    /// `t = 0` and `0 < x < c/R`.
    TimeZero,
}

/// `min |P f(Γ(x,t),t)|` over `n_nodes` interior points of the witness set,
/// evaluated by direct quadrature on the given spectrum.
pub fn witness_minimum(
    f: &SpectralFunction,
    fam: &CounterexampleFamily,
    witness: Witness,
    n_nodes: usize,
) -> Result<LowerBoundReport> {
    if n_nodes < MIN_WITNESS_NODES {
        return Err(LabError::invalid(
            "n_nodes",
            format!("at least {MIN_WITNESS_NODES} nodes are required, got {n_nodes}"),
        ));
    }
    if f.is_zero() {
        return Err(LabError::ZeroNorm("the spectrum vanishes identically".into()));
    }
    let params = EvolutionParams::schrodinger(fam.gamma)?;
    let set = fam.sets_ab()?;
    let xs = match witness {
        Witness::Selector => set.interior_nodes(n_nodes),
        Witness::TimeZero => crate::domain::Interval {
            lo: 0.0,
            hi: fam.c / fam.r,
        }
        .interior_nodes(n_nodes),
    };
    let values: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let t = match witness {
                Witness::Selector => fam.selector_t(x)?,
                Witness::TimeZero => 0.0,
            };
            let y = x - if t > 0.0 { t.powf(fam.alpha) } else { 0.0 };
            Ok((x, direct_quadrature(f, &params, y, t).norm()))
        })
        .collect::<Result<_>>()?;
    let (argmin_x, min_value) = values
        .iter()
        .copied()
        .fold((f64::NAN, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc });
    Ok(LowerBoundReport {
        family: *fam,
        n_nodes,
        min_value,
        argmin_x,
        bound: WITNESS_BOUND,
        pass: min_value >= WITNESS_BOUND,
    })
}

/// Witness minimum for the family's own `f_R`.
pub fn lower_bound(fam: &CounterexampleFamily, witness: Witness, n_nodes: usize) -> Result<LowerBoundReport> {
    let f = fam.spectrum(DEFAULT_SAMPLES)?;
    witness_minimum(&f, fam, witness, n_nodes)
}

/// Halves `c` from its current value until the selector witness clears
/// `1/(4π)`.
pub fn calibrate(fam: &CounterexampleFamily, n_nodes: usize) -> Result<(CounterexampleFamily, LowerBoundReport)> {
    let mut current = *fam;
    loop {
        let report = lower_bound(&current, Witness::Selector, n_nodes)?;
        if report.pass {
            return Ok((current, report));
        }
        let next = 0.5 * current.c;
        if next < MIN_C {
            return Err(LabError::Calibration(format!(
                "no c ≥ 2^-20 certifies the bound for {} (last minimum {:.6e} at c = {})",
                fam.kind, report.min_value, current.c
            )));
        }
        current = current.with_c(next)?;
    }
}
