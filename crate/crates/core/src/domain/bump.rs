use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::summation::trapezoid_uniform;

/// Nodes used to fix the normalisation constant. The profile is flat to all
/// orders at both ends of its support, so the trapezoid rule converges
/// faster than any power of the step.
const NORMALIZATION_NODES: usize = 8192;

/// Placement of a smooth bump inside `[0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub center: f64,
    pub half_width: f64,
    /// Target value of `∫ g`.
    pub normalization: f64,
}

impl Default for BumpSpec {
    /// The canonical profile `Z·exp(−1/(ξ(1/2−ξ)))` on `(0, 1/2)` with unit mass.
    fn default() -> Self {
        Self {
            center: 0.25,
            half_width: 0.25,
            normalization: 1.0,
        }
    }
}

/// Evaluable C∞ profile `g`, compactly supported in `[center − w, center + w]`.
///
/// With `z = (ξ − center + w)/(2w) ∈ (0, 1)` the profile is
/// `Z·exp(−4/(z(1−z)))`, which for the default spec is exactly
/// `Z·exp(−1/(ξ(1/2 − ξ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    spec: BumpSpec,
    scale: f64,
}

pub fn make_bump(spec: BumpSpec) -> Result<Bump> {
    if !(spec.half_width > 0.0) || !spec.half_width.is_finite() {
        return Err(LabError::invalid("half_width", "must be positive and finite"));
    }
    if !spec.center.is_finite() || !spec.normalization.is_finite() {
        return Err(LabError::invalid("center", "must be finite"));
    }
    let lo = spec.center - spec.half_width;
    let hi = spec.center + spec.half_width;
    // A relative slack of a few ulps keeps [0, 1/2] itself admissible.
    let eps = 4.0 * f64::EPSILON;
    if lo < -eps || hi > 0.5 + eps {
        return Err(LabError::Support(format!(
            "requested support [{lo}, {hi}] leaves [0, 1/2]"
        )));
    }
    let h = 1.0 / NORMALIZATION_NODES as f64;
    let raw: Vec<f64> = (0..=NORMALIZATION_NODES)
        .map(|k| unit_profile(k as f64 * h))
        .collect();
    let mass = trapezoid_uniform(&raw, h) * 2.0 * spec.half_width;
    Ok(Bump {
        spec,
        scale: spec.normalization / mass,
    })
}

#[inline]
fn unit_profile(z: f64) -> f64 {
    if z <= 0.0 || z >= 1.0 {
        0.0
    } else {
        (-4.0 / (z * (1.0 - z))).exp()
    }
}

impl Bump {
    pub fn canonical() -> Self {
        make_bump(BumpSpec::default()).expect("canonical bump is valid")
    }

    pub fn spec(&self) -> BumpSpec {
        self.spec
    }

    pub fn support(&self) -> (f64, f64) {
        (
            self.spec.center - self.spec.half_width,
            self.spec.center + self.spec.half_width,
        )
    }

    #[inline]
    pub fn eval(&self, xi: f64) -> f64 {
        let z = (xi - self.spec.center + self.spec.half_width) / (2.0 * self.spec.half_width);
        self.scale * unit_profile(z)
    }

    /// `‖g‖₂²`, by the same flat-ended trapezoid rule used for normalisation.
    pub fn l2_norm_sq(&self) -> f64 {
        let h = 1.0 / NORMALIZATION_NODES as f64;
        let vals: Vec<f64> = (0..=NORMALIZATION_NODES)
            .map(|k| {
                let v = self.scale * unit_profile(k as f64 * h);
                v * v
            })
            .collect();
        trapezoid_uniform(&vals, h) * 2.0 * self.spec.half_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn canonical_matches_closed_form_shape() {
        let g = Bump::canonical();
        for &xi in &[0.05f64, 0.1, 0.2, 0.3, 0.45] {
            let direct: f64 = (-1.0 / (xi * (0.5 - xi))).exp();
            let ratio = g.eval(xi) / direct;
            let ref_ratio = g.eval(0.25) / (-16.0f64).exp();
            assert!((ratio / ref_ratio - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishes_outside_support() {
        let g = Bump::canonical();
        for &xi in &[-1.0, -1e-12, 0.0, 0.5, 0.5 + 1e-12, 3.0] {
            assert_eq!(g.eval(xi), 0.0);
        }
    }

    #[test]
    fn unit_mass_by_independent_rule() {
        let g = Bump::canonical();
        let mass = simpson(|x| g.eval(x), 0.0, 0.5, 20_000);
        assert!((mass - 1.0).abs() < 1e-10, "mass = {mass}");

        let narrow = make_bump(BumpSpec {
            center: 0.3,
            half_width: 0.05,
            normalization: 2.5,
        })
        .unwrap();
        let mass = simpson(|x| narrow.eval(x), 0.25, 0.35, 20_000);
        assert!((mass - 2.5).abs() < 1e-9);
    }

    #[test]
    fn peak_sits_at_center() {
        let g = Bump::canonical();
        let peak = g.eval(0.25);
        let n = 100_000;
        let max = (0..=n)
            .map(|k| g.eval(0.5 * k as f64 / n as f64))
            .fold(0.0f64, f64::max);
        assert!(peak >= max);
    }

    #[test]
    fn support_violations_are_rejected() {
        let bad = BumpSpec {
            center: 0.45,
            half_width: 0.1,
            normalization: 1.0,
        };
        assert!(matches!(make_bump(bad), Err(LabError::Support(_))));
        let bad = BumpSpec {
            center: 0.05,
            half_width: 0.1,
            normalization: 1.0,
        };
        assert!(matches!(make_bump(bad), Err(LabError::Support(_))));
        let bad = BumpSpec {
            center: 0.25,
            half_width: 0.0,
            normalization: 1.0,
        };
        assert!(make_bump(bad).is_err());
    }

    #[test]
    fn l2_norm_against_simpson() {
        let g = Bump::canonical();
        let direct = simpson(|x| g.eval(x).powi(2), 0.0, 0.5, 40_000);
        assert!((g.l2_norm_sq() / direct - 1.0).abs() < 1e-10);
    }
}
