use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Dispersion exponent `m`, complex-time exponent `γ` and the damping switch.
///
/// With damping on the Fourier multiplier is `e^{it|ξ|^m}·e^{−t^γ|ξ|^m}`;
/// with damping off it is the unitary `e^{it|ξ|^m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    pub m: f64,
    pub gamma: f64,
    pub damping: bool,
}

impl EvolutionParams {
    pub fn new(m: f64, gamma: f64, damping: bool) -> Result<Self> {
        let p = Self { m, gamma, damping };
        p.validate()?;
        Ok(p)
    }

    /// `m = 2` with damping.
    pub fn schrodinger(gamma: f64) -> Result<Self> {
        Self::new(2.0, gamma, true)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(LabError::invalid("m", format!("must be positive, got {}", self.m)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(LabError::invalid("gamma", format!("must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    /// `|ξ|^m`, with `0^m = 0`.
    #[inline]
    pub fn symbol(&self, xi: f64) -> f64 {
        pow_abs(xi, self.m)
    }

    /// Coefficient `t^γ` of the damping exponent (zero when damping is off).
    #[inline]
    pub fn damping_rate(&self, t: f64) -> f64 {
        if self.damping && t > 0.0 {
            t.powf(self.gamma)
        } else {
            0.0
        }
    }

    /// `e^{it|ξ|^m}·D(t, ξ)`.
    #[inline]
    pub fn multiplier(&self, t: f64, xi: f64) -> Complex64 {
        let s = self.symbol(xi);
        Complex64::from_polar((-self.damping_rate(t) * s).exp(), t * s)
    }

    /// Group velocity profile `∂ξ|ξ|^m = m|ξ|^{m−1}·sgn ξ`, zero at the origin.
    #[inline]
    pub fn symbol_derivative(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            0.0
        } else {
            self.m * pow_abs(xi, self.m - 1.0) * xi.signum()
        }
    }
}

/// `|x|^p` with fast paths for the common exponents.
#[inline]
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 2.0 {
        a * a
    } else if p == 1.0 {
        a
    } else if p == 0.0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else {
        a.powf(p)
    }
}
