use serde::{Deserialize, Serialize};

use crate::domain::SpectrumProfile;
use crate::error::{LabError, Result};
use crate::summation::trapezoid_uniform;
use num_complex::Complex64;

/// Even cutoff `Ψ(ξ) = b((|ξ| − a)/(c − a))` supported in `a < |ξ| < c`, with
/// `b(z) = e⁴·exp(−1/(z(1−z)))` on `(0, 1)` (peak value 1 at `z = 1/2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSpec {
    pub inner: f64,
    pub outer: f64,
}

impl Default for CutoffSpec {
    fn default() -> Self {
        Self { inner: 0.5, outer: 2.0 }
    }
}

impl CutoffSpec {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(0.5 <= inner && inner < outer && outer <= 2.0) {
            return Err(LabError::invalid(
                "cutoff",
                format!("need 1/2 ≤ inner < outer ≤ 2, got ({inner}, {outer})"),
            ));
        }
        Ok(Self { inner, outer })
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let z = (xi.abs() - self.inner) / (self.outer - self.inner);
        if z <= 0.0 || z >= 1.0 {
            0.0
        } else {
            (4.0 - 1.0 / (z * (1.0 - z))).exp()
        }
    }

    /// `∫Ψ` over the real line.
    pub fn integral(&self) -> f64 {
        let n = 1 << 14;
        let h = (self.outer - self.inner) / n as f64;
        let v: Vec<f64> = (0..=n).map(|k| self.eval(self.inner + k as f64 * h)).collect();
        2.0 * trapezoid_uniform(&v, h)
    }

    /// `ξ ↦ Ψ(ξ/λ)` as a spectrum profile.
    pub fn scaled(&self, lambda: f64) -> ScaledCutoff {
        ScaledCutoff { spec: *self, lambda }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCutoff {
    spec: CutoffSpec,
    lambda: f64,
}

impl SpectrumProfile for ScaledCutoff {
    fn eval(&self, xi: f64) -> Complex64 {
        Complex64::new(self.spec.eval(xi / self.lambda), 0.0)
    }

    fn support(&self) -> (f64, f64) {
        (-self.spec.outer * self.lambda, self.spec.outer * self.lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let c = CutoffSpec::default();
        assert_eq!(c.eval(0.5), 0.0);
        assert_eq!(c.eval(2.0), 0.0);
        assert_eq!(c.eval(0.1), 0.0);
        assert!((c.eval(1.25) - 1.0).abs() < 1e-15);
        assert_eq!(c.eval(-0.9), c.eval(0.9));
        for k in 1..200 {
            let xi = 0.5 + 1.5 * k as f64 / 200.0;
            assert!(c.eval(xi) > 0.0 && c.eval(xi) <= 1.0);
        }
    }

    #[test]
    fn integral_by_independent_rule() {
        let c = CutoffSpec::default();
        // composite Simpson on each half
        let n = 4000;
        let h = 1.5 / n as f64;
        let mut s = c.eval(0.5) + c.eval(2.0);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * c.eval(0.5 + k as f64 * h);
        }
        let simpson = 2.0 * s * h / 3.0;
        assert!((c.integral() - simpson).abs() < 1e-10);
    }

    #[test]
    fn rejects_supports_outside_the_annulus() {
        assert!(CutoffSpec::new(0.4, 2.0).is_err());
        assert!(CutoffSpec::new(1.0, 1.0).is_err());
        assert!(CutoffSpec::new(0.75, 1.5).is_ok());
    }
}
