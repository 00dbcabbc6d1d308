//! Sharp Sobolev exponents `s(α, γ, m)` for pointwise convergence along
//! Hölder curves, one strategy per theorem, routed by the `(α, m)` hypotheses.
//!
//! Every theorem is stored as a list of pieces `a + b/γ` on left-closed
//! γ-intervals, so the same data yields values, regime tags and breakpoints,
//! either in `f64` or exactly in `BigRational`. Whether convergence holds at
//! `s = s(γ)` itself is left open; results flag this with `endpoint_open`.

mod scalar;
mod theorems;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::{CounterexampleFamily, CounterexampleKind};
use crate::error::{LabError, Result};

pub use scalar::{parse_rational, Scalar};
pub use theorems::{eval_pieces, theorems, Piece, Theorem};

/// Offset used by [`continuity_check`] on either side of a breakpoint.
pub const CONTINUITY_OFFSET: f64 = 1e-9;
/// Largest admissible jump at a breakpoint.
pub const CONTINUITY_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentQuery {
    pub alpha: f64,
    pub gamma: f64,
    pub m: f64,
}

impl ExponentQuery {
    pub fn new(alpha: f64, gamma: f64, m: f64) -> Result<Self> {
        let q = Self { alpha, gamma, m };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha_m(self.alpha, self.m)?;
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(LabError::invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        Ok(())
    }
}

fn check_alpha_m(alpha: f64, m: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(LabError::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(LabError::invalid("m", format!("must be positive, got {m}")));
    }
    Ok(())
}

fn check_alpha_m_exact(alpha: &BigRational, m: &BigRational) -> Result<()> {
    if !(*alpha > BigRational::zero() && *alpha <= BigRational::one()) {
        return Err(LabError::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(*m > BigRational::zero()) {
        return Err(LabError::invalid("m", format!("must be positive, got {m}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentResult {
    pub s: f64,
    pub theorem: String,
    /// γ-interval of the active piece, e.g. `[2α, 1)`.
    pub regime: String,
    /// Convergence at `s = s(γ)` itself is not decided.
    pub endpoint_open: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactExponent {
    pub s: BigRational,
    pub theorem: String,
    pub regime: String,
}

impl fmt::Display for ExactExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s = {} ({}, γ ∈ {})", self.s, self.theorem, self.regime)
    }
}

fn uncovered(alpha: impl ToString, m: impl ToString) -> LabError {
    LabError::UncoveredHypothesis {
        alpha: alpha.to_string(),
        m: m.to_string(),
    }
}

/// The unique theorem whose hypotheses contain `(α, m)`.
pub fn route(alpha: f64, m: f64) -> Result<Arc<dyn Theorem>> {
    check_alpha_m(alpha, m)?;
    let reg = theorems();
    let mut hits = reg.iter().filter(|t| t.covers(alpha, m));
    match (hits.next(), hits.next()) {
        (Some(t), None) => Ok(t.clone()),
        _ => Err(uncovered(alpha, m)),
    }
}

pub fn route_exact(alpha: &BigRational, m: &BigRational) -> Result<Arc<dyn Theorem>> {
    check_alpha_m_exact(alpha, m)?;
    let reg = theorems();
    let mut hits = reg.iter().filter(|t| t.covers_exact(alpha, m));
    match (hits.next(), hits.next()) {
        (Some(t), None) => Ok(t.clone()),
        _ => Err(uncovered(alpha, m)),
    }
}

pub fn exponent(q: &ExponentQuery) -> Result<ExponentResult> {
    q.validate()?;
    let t = route(q.alpha, q.m)?;
    let (s, regime) = eval_pieces(&t.pieces(q.alpha, q.m), &q.gamma);
    Ok(ExponentResult {
        s,
        theorem: t.name().to_string(),
        regime: regime.to_string(),
        endpoint_open: true,
    })
}

pub fn exponent_exact(alpha: &BigRational, gamma: &BigRational, m: &BigRational) -> Result<ExactExponent> {
    if !(*gamma > BigRational::zero()) {
        return Err(LabError::invalid("gamma", format!("must be positive, got {gamma}")));
    }
    let t = route_exact(alpha, m)?;
    let (s, regime) = eval_pieces(&t.pieces_exact(alpha, m), gamma);
    Ok(ExactExponent {
        s,
        theorem: t.name().to_string(),
        regime: regime.to_string(),
    })
}

/// A regime boundary with the values of the two adjacent pieces there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakpoint<S> {
    pub gamma: S,
    pub left: S,
    pub right: S,
    pub left_regime: &'static str,
    pub right_regime: &'static str,
}

fn boundaries<S: Scalar>(pieces: &[Piece<S>]) -> Vec<Breakpoint<S>> {
    pieces
        .windows(2)
        .map(|w| Breakpoint {
            gamma: w[1].start.clone(),
            left: w[0].value(&w[1].start),
            right: w[1].value(&w[1].start),
            left_regime: w[0].regime,
            right_regime: w[1].regime,
        })
        .collect()
}

/// Ordered γ-boundaries of the routed theorem.
pub fn breakpoints(alpha: f64, m: f64) -> Result<Vec<Breakpoint<f64>>> {
    let t = route(alpha, m)?;
    Ok(boundaries(&t.pieces(alpha, m)))
}

pub fn breakpoints_exact(alpha: &BigRational, m: &BigRational) -> Result<Vec<Breakpoint<BigRational>>> {
    let t = route_exact(alpha, m)?;
    Ok(boundaries(&t.pieces_exact(alpha, m)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityEntry {
    pub boundary: f64,
    pub left: f64,
    pub right: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub alpha: f64,
    pub m: f64,
    pub theorem: String,
    pub entries: Vec<ContinuityEntry>,
    pub max_gap: f64,
    pub pass: bool,
}

/// Evaluates [`exponent`] at `γ·(1 ∓ 10⁻⁹)` around every breakpoint.
pub fn continuity_check(alpha: f64, m: f64) -> Result<ContinuityReport> {
    let t = route(alpha, m)?;
    let entries = breakpoints(alpha, m)?
        .into_iter()
        .map(|b| {
            let g = b.gamma;
            let left = exponent(&ExponentQuery::new(alpha, g * (1.0 - CONTINUITY_OFFSET), m)?)?.s;
            let right = exponent(&ExponentQuery::new(alpha, g * (1.0 + CONTINUITY_OFFSET), m)?)?.s;
            Ok(ContinuityEntry {
                boundary: g,
                left,
                right,
                gap: (right - left).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = entries.iter().map(|e| e.gap).fold(0.0, f64::max);
    Ok(ContinuityReport {
        alpha,
        m,
        theorem: t.name().to_string(),
        entries,
        max_gap,
        pass: max_gap <= CONTINUITY_TOLERANCE,
    })
}

/// Growth exponent of `Q(R)` in `R` predicted by the counterexample's lower bound.
pub fn predicted_q_slope(fam: &CounterexampleFamily) -> Result<f64> {
    fam.validate()?;
    // the witness set exists only inside the family's regime
    fam.sets_ab()?;
    let (a, g) = (fam.alpha, fam.gamma);
    Ok(match fam.kind {
        CounterexampleKind::Thm31 if g < 1.0 => (0.5 - a / g).max(0.0),
        CounterexampleKind::Thm31 => (0.5 - a).max(0.0),
        CounterexampleKind::Thm32 if g < 2.0 => 0.5 * (g - 1.0),
        CounterexampleKind::Thm32 => 0.5,
    })
}
