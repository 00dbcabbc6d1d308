use serde::{Deserialize, Serialize};

use crate::domain::CounterexampleFamily;
use crate::error::{LabError, Result};

/// Geometric time grid `{0} ∪ {2^{−k·s} : 0 ≤ k·s ≤ −t_min}` with `s = log2_step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGridSpec {
    pub t_min_exponent: f64,
    /// `log₂` of the geometric ratio.
    pub log2_step: f64,
}

impl TimeGridSpec {
    pub const DEFAULT_LOG2_STEP: f64 = 0.125;

    pub fn new(t_min_exponent: f64, log2_step: f64) -> Self {
        Self {
            t_min_exponent,
            log2_step,
        }
    }

    /// Ratio `2^{1/8}` and `t_min_exponent = ⌈log₂ λ^{−2}⌉ − 4`.
    pub fn for_lambda(lambda: f64) -> Self {
        Self::new((-2.0 * lambda.log2()).ceil() - 4.0, Self::DEFAULT_LOG2_STEP)
    }

    pub fn ratio(&self) -> f64 {
        self.log2_step.exp2()
    }

    /// Same range with half the geometric step; the result contains every node
    /// of `self`.
    pub fn refined(&self) -> Self {
        Self::new(self.t_min_exponent, 0.5 * self.log2_step)
    }
}

/// Time nodes shared by all positions, plus per-position witness times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub spec: TimeGridSpec,
    /// Strictly increasing, starting at 0 and ending at 1.
    pub nodes: Vec<f64>,
    /// `extra_times[i]` are additional times sampled only at the `i`-th position.
    pub extra_times: Vec<Vec<f64>>,
}

impl TimeGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Geometric grid for `spec`; when a family is given, every position inside
/// its witness set gets the selector time `t_x` as an extra time.
pub fn build_time_grid(spec: TimeGridSpec, fam: Option<&CounterexampleFamily>, xs: &[f64]) -> Result<TimeGrid> {
    if !(spec.t_min_exponent <= -2.0 && spec.t_min_exponent.is_finite()) {
        return Err(LabError::invalid(
            "t_min_exponent",
            format!("must be finite and at most −2, got {}", spec.t_min_exponent),
        ));
    }
    if !(spec.log2_step > 0.0 && spec.log2_step.is_finite()) {
        return Err(LabError::invalid("log2_step", "the geometric step must exceed 1"));
    }
    // exponents −k·s are exact for dyadic s, which makes refined grids
    // supersets bit for bit
    let count = (-spec.t_min_exponent / spec.log2_step * (1.0 + 1e-12)).floor() as usize;
    let mut nodes = Vec::with_capacity(count + 2);
    nodes.push(0.0);
    nodes.extend((0..=count).rev().map(|k| (-(k as f64) * spec.log2_step).exp2()));

    let extra_times = match fam {
        None => vec![Vec::new(); xs.len()],
        Some(fam) => {
            let set = fam.sets_ab()?;
            xs.iter()
                .map(|&x| {
                    if set.contains(x) {
                        fam.selector_t(x).map(|t| vec![t])
                    } else {
                        Ok(Vec::new())
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(TimeGrid {
        spec,
        nodes,
        extra_times,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octave_grid() {
        let g = build_time_grid(TimeGridSpec::new(-4.0, 1.0), None, &[]).unwrap();
        assert_eq!(g.nodes, vec![0.0, 0.0625, 0.125, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn refinement_is_a_superset() {
        let s = TimeGridSpec::new(-20.0, 0.125);
        let a = build_time_grid(s, None, &[]).unwrap();
        let b = build_time_grid(s.refined(), None, &[]).unwrap();
        assert!(a.nodes.iter().all(|t| b.nodes.contains(t)));
        assert_eq!(b.len(), 2 * a.len() - 2);
    }

    #[test]
    fn witness_times_are_appended() {
        let fam = CounterexampleFamily::thm31(0.5, 0.5, 0.9, 2.0).unwrap();
        let g = build_time_grid(TimeGridSpec::new(-4.0, 1.0), Some(&fam), &[-0.5, 1e-4]).unwrap();
        assert!(g.extra_times[0].is_empty());
        assert!((g.extra_times[1][0] - 1e-8).abs() < 1e-22);
    }

    #[test]
    fn rejects_shallow_grids() {
        assert!(build_time_grid(TimeGridSpec::new(-1.0, 1.0), None, &[]).is_err());
    }

    #[test]
    fn default_spec_tracks_lambda() {
        let s = TimeGridSpec::for_lambda(64.0);
        assert_eq!(s.t_min_exponent, -16.0);
        assert!((s.ratio() - 2f64.powf(0.125)).abs() < 1e-15);
    }
}
