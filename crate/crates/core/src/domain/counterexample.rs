use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bump::Bump;
use super::spectrum::{ScaledBump, SpectralFunction};
use crate::error::{LabError, Result};

/// Nodes used by [`CounterexampleFamily::spectrum`] unless told otherwise.
pub const DEFAULT_SAMPLES: usize = 129;
const MIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// `f̂_R(η) = (1/R)·g(η/R)`.
    Thm31,
    /// `f̂_R(η) = (1/R)·g((η + R^b)/R)`.
    Thm32,
}

impl CounterexampleKind {
    pub fn name(self) -> &'static str {
        match self {
            CounterexampleKind::Thm31 => "thm31",
            CounterexampleKind::Thm32 => "thm32",
        }
    }
}

impl fmt::Display for CounterexampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CounterexampleKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm31" => Ok(CounterexampleKind::Thm31),
            "thm32" => Ok(CounterexampleKind::Thm32),
            other => Err(LabError::UnknownStrategy {
                kind: "counterexample family",
                name: other.to_string(),
                available: "thm31, thm32".into(),
            }),
        }
    }
}

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// `n` interior points `lo + (k + 1/2)·w/n`.
    pub fn interior_nodes(&self, n: usize) -> Vec<f64> {
        let w = self.width() / n as f64;
        (0..n).map(|k| self.lo + (k as f64 + 0.5) * w).collect()
    }
}

/// One member `f_R` of a counterexample family, together with the smallness
/// constant `c` that defines its witness set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleFamily {
    pub kind: CounterexampleKind,
    pub alpha: f64,
    pub gamma: f64,
    /// Modulation exponent; only meaningful for `thm32`.
    pub b: f64,
    pub c: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl CounterexampleFamily {
    pub fn new(kind: CounterexampleKind, alpha: f64, gamma: f64, b: f64, c: f64, r: f64) -> Result<Self> {
        let fam = Self {
            kind,
            alpha,
            gamma,
            b,
            c,
            r,
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn thm31(alpha: f64, gamma: f64, c: f64, r: f64) -> Result<Self> {
        Self::new(CounterexampleKind::Thm31, alpha, gamma, 0.0, c, r)
    }

    pub fn thm32(alpha: f64, gamma: f64, b: f64, c: f64, r: f64) -> Result<Self> {
        Self::new(CounterexampleKind::Thm32, alpha, gamma, b, c, r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(LabError::invalid("alpha", format!("must lie in (0, 1], got {}", self.alpha)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(LabError::invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(LabError::invalid("c", format!("must lie in (0, 1), got {}", self.c)));
        }
        if !(self.r >= 2.0 && self.r.is_finite()) {
            return Err(LabError::invalid("R", format!("must be at least 2, got {}", self.r)));
        }
        if self.kind == CounterexampleKind::Thm32 && !(self.b >= 1.0 && self.b.is_finite()) {
            return Err(LabError::invalid("b", format!("must lie in [1, ∞), got {}", self.b)));
        }
        Ok(())
    }

    /// Same family at another scale.
    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::new(self.kind, self.alpha, self.gamma, self.b, self.c, r)
    }

    /// Same family with another smallness constant.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::new(self.kind, self.alpha, self.gamma, self.b, c, self.r)
    }

    /// Frequency shift `R^b` (zero for `thm31`).
    pub fn shift(&self) -> f64 {
        match self.kind {
            CounterexampleKind::Thm31 => 0.0,
            CounterexampleKind::Thm32 => self.r.powf(self.b),
        }
    }

    /// Dyadic frequency level of `f_R`: `R` for `thm31`, `R^b` for `thm32`.
    pub fn lambda(&self) -> f64 {
        match self.kind {
            CounterexampleKind::Thm31 => self.r,
            CounterexampleKind::Thm32 => self.shift(),
        }
    }

    /// Closed support of `f̂_R`.
    pub fn support(&self) -> (f64, f64) {
        let s = self.shift();
        (-s, 0.5 * self.r - s)
    }

    pub fn profile(&self) -> ScaledBump {
        ScaledBump {
            bump: Bump::canonical(),
            scale: self.r,
            shift: self.shift(),
        }
    }

    /// Samples `f̂_R` on `n_samples` nodes spanning its support.
    pub fn spectrum(&self, n_samples: usize) -> Result<SpectralFunction> {
        if n_samples < MIN_SAMPLES {
            return Err(LabError::Resolution(format!(
                "{n_samples} nodes cannot resolve the support of f̂_R; at least {MIN_SAMPLES} are needed"
            )));
        }
        let (lo, hi) = self.support();
        SpectralFunction::from_profile(Arc::new(self.profile()), lo, hi, n_samples, None)
    }

    fn check_regime(&self) -> Result<()> {
        if self.kind == CounterexampleKind::Thm31 {
            return Ok(());
        }
        let (a, g, b) = (self.alpha, self.gamma, self.b);
        if !(a > 0.25) || g < 1.0 {
            return Err(LabError::Regime(format!(
                "thm32 needs alpha in (1/4, 1] and gamma ≥ 1, got alpha = {a}, gamma = {g}"
            )));
        }
        let lower = (0.5 / a).max(1.0);
        if (same(b, g) && g >= lower && g < 2.0) || (same(b, 2.0) && g >= 2.0) {
            Ok(())
        } else {
            Err(LabError::Regime(format!(
                "thm32 covers b = gamma with gamma in [{lower}, 2) and b = 2 with gamma ≥ 2; got b = {b}, gamma = {g}"
            )))
        }
    }

    /// The witness set on which `sup_t |P f_R(Γ(x,t),t)| ≥ 1/(4π)`.
    pub fn sets_ab(&self) -> Result<Interval> {
        self.check_regime()?;
        let (a, g, c, r) = (self.alpha, self.gamma, self.c, self.r);
        let hi = match self.kind {
            CounterexampleKind::Thm31 if g < 1.0 => c * r.powf(-2.0 * a / g),
            CounterexampleKind::Thm31 => c * r.powf(-2.0 * a),
            CounterexampleKind::Thm32 => c.powf(a) * r.powf(-2.0 * a) + 2.0 * c * r.powf(self.b - 2.0),
        };
        Ok(Interval { lo: 0.0, hi })
    }

    /// The witness time `t_x` at which `|P f_R(Γ(x,t_x),t_x)| ≥ 1/(4π)`.
    pub fn selector_t(&self, x: f64) -> Result<f64> {
        let set = self.sets_ab()?;
        if !set.contains(x) {
            return Err(LabError::Domain(format!("x = {x} lies outside ({}, {})", set.lo, set.hi)));
        }
        match self.kind {
            CounterexampleKind::Thm31 => Ok(x.powf(1.0 / self.alpha)),
            CounterexampleKind::Thm32 => self.thm32_root(x),
        }
    }

    /// Root of `x − t^α − 2R^b t` on `(0, cR^{−2})` by bisection. The map is
    /// strictly increasing in `t`, so the bracket is kept until the midpoint
    /// can no longer be distinguished from an endpoint.
    fn thm32_root(&self, x: f64) -> Result<f64> {
        let s2 = 2.0 * self.shift();
        let a = self.alpha;
        let f = |t: f64| x - t.powf(a) - s2 * t;
        let mut lo = 0.0_f64;
        let mut hi = self.c * self.r.powi(-2);
        if !(f(lo) > 0.0 && f(hi) < 0.0) {
            return Err(LabError::RootNotBracketed {
                x,
                reason: format!("no sign change on (0, {hi}); c and R are inconsistent"),
            });
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = f(mid);
            if v == 0.0 {
                return Ok(mid);
            }
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
    }

    /// Residual `x − t^α − 2R^b t` of the witness equation (zero for `thm31`).
    pub fn selector_residual(&self, x: f64, t: f64) -> f64 {
        match self.kind {
            CounterexampleKind::Thm31 => x - t.powf(self.alpha),
            CounterexampleKind::Thm32 => x - t.powf(self.alpha) - 2.0 * self.shift() * t,
        }
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}
