use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use super::bump::{make_bump, Bump, BumpSpec};
use crate::error::{LabError, Result};
use crate::summation::trapezoid_uniform;

/// An analytic description of `f̂` that can be sampled at any frequency.
pub trait SpectrumProfile: Send + Sync + fmt::Debug {
    fn eval(&self, xi: f64) -> Complex64;
    /// Closed interval outside which the profile vanishes.
    fn support(&self) -> (f64, f64);
}

/// `f̂(η) = (1/R)·g((η + shift)/R)`.
#[derive(Debug, Clone)]
pub struct ScaledBump {
    pub bump: Bump,
    pub scale: f64,
    pub shift: f64,
}

impl SpectrumProfile for ScaledBump {
    fn eval(&self, xi: f64) -> Complex64 {
        Complex64::new(self.bump.eval((xi + self.shift) / self.scale) / self.scale, 0.0)
    }

    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.bump.support();
        (lo * self.scale - self.shift, hi * self.scale - self.shift)
    }
}

/// `e^{−ξ²/2}` truncated to `[−cutoff, cutoff]`. Used as a closed-form oracle.
#[derive(Debug, Clone, Copy)]
pub struct GaussianProfile {
    pub cutoff: f64,
}

impl SpectrumProfile for GaussianProfile {
    fn eval(&self, xi: f64) -> Complex64 {
        if xi.abs() > self.cutoff {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((-0.5 * xi * xi).exp(), 0.0)
        }
    }

    fn support(&self) -> (f64, f64) {
        (-self.cutoff, self.cutoff)
    }
}

/// Finite sum of complex-weighted bumps `Σ a_k · b((ξ − c_k)/w_k)`.
#[derive(Debug, Clone)]
pub struct BumpSum {
    components: Vec<(f64, f64, Complex64)>,
    shape: Bump,
}

impl BumpSum {
    pub const RECOMMENDED_NODES: usize = 2049;

    pub fn new(components: Vec<(f64, f64, Complex64)>) -> Self {
        let shape = make_bump(BumpSpec {
            center: 0.25,
            half_width: 0.25,
            normalization: 0.5,
        })
        .expect("unit shape");
        Self { components, shape }
    }

    /// Random band-limited spectrum supported in `λ/2 ≤ |ξ| ≤ 2λ`, on both
    /// sides of the origin. Component widths are at least `λ/10`, so the
    /// spatial profile is negligible beyond `|x| ≈ 500/λ`; a grid of
    /// [`Self::RECOMMENDED_NODES`] nodes over `[−2λ, 2λ]` resolves it.
    pub fn random_in_band<R: Rng + ?Sized>(lambda: f64, n_components: usize, rng: &mut R) -> Self {
        let components = (0..n_components)
            .map(|_| {
                let width = rng.gen_range(0.1..0.25) * lambda;
                let center = rng.gen_range(0.5 * lambda + width..2.0 * lambda - width);
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let amp = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
                (sign * center, width, amp)
            })
            .collect();
        Self::new(components)
    }
}

impl SpectrumProfile for BumpSum {
    fn eval(&self, xi: f64) -> Complex64 {
        self.components
            .iter()
            .map(|&(c, w, a)| {
                // shape lives on (0, 1/2); map [c − w, c + w] onto it
                let z = 0.25 + 0.25 * (xi - c) / w;
                a * self.shape.eval(z)
            })
            .sum()
    }

    fn support(&self) -> (f64, f64) {
        let lo = self.components.iter().map(|c| c.0 - c.1).fold(f64::INFINITY, f64::min);
        let hi = self.components.iter().map(|c| c.0 + c.1).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Samples of `f̂` at uniform nodes `ξ_k = ξ_min + kΔξ`.
///
/// The node spacing fixes the spatial period `2π/Δξ` in which `f` itself is
/// assumed to live, centred at the origin; [`Self::spatial_half_period`]
/// reports half of it. When the samples come from an analytic profile the
/// profile is kept so that refinement resamples exactly; otherwise refinement
/// is trigonometric interpolation, which is exact under the same assumption.
#[derive(Clone)]
pub struct SpectralFunction {
    xi_min: f64,
    xi_max: f64,
    samples: Vec<Complex64>,
    band: Option<f64>,
    profile: Option<Arc<dyn SpectrumProfile>>,
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("xi_min", &self.xi_min)
            .field("xi_max", &self.xi_max)
            .field("n_samples", &self.samples.len())
            .field("band", &self.band)
            .field("profile", &self.profile)
            .finish()
    }
}

impl SpectralFunction {
    pub fn from_samples(
        xi_min: f64,
        xi_max: f64,
        samples: Vec<Complex64>,
        band: Option<f64>,
    ) -> Result<Self> {
        let f = Self {
            xi_min,
            xi_max,
            samples,
            band,
            profile: None,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_profile(
        profile: Arc<dyn SpectrumProfile>,
        xi_min: f64,
        xi_max: f64,
        n_samples: usize,
        band: Option<f64>,
    ) -> Result<Self> {
        if n_samples < 2 {
            return Err(LabError::invalid("n_samples", "need at least two nodes"));
        }
        let dxi = (xi_max - xi_min) / (n_samples - 1) as f64;
        let samples = (0..n_samples)
            .map(|k| profile.eval(xi_min + k as f64 * dxi))
            .collect();
        let f = Self {
            xi_min,
            xi_max,
            samples,
            band,
            profile: Some(profile),
        };
        f.validate()?;
        Ok(f)
    }

    /// Samples a profile over its own support.
    pub fn sample_profile(
        profile: Arc<dyn SpectrumProfile>,
        n_samples: usize,
        band: Option<f64>,
    ) -> Result<Self> {
        let (lo, hi) = profile.support();
        Self::from_profile(profile, lo, hi, n_samples, band)
    }

    fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(LabError::invalid("n_samples", "need at least two nodes"));
        }
        if !(self.xi_min < self.xi_max) || !self.xi_min.is_finite() || !self.xi_max.is_finite() {
            return Err(LabError::invalid("xi_min", "need finite xi_min < xi_max"));
        }
        if let Some(k) = self.samples.iter().position(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(LabError::invalid("samples", format!("sample {k} is not finite")));
        }
        if let Some(lambda) = self.band {
            if !(lambda > 0.0) {
                return Err(LabError::invalid("band", "band level must be positive"));
            }
            let slack = 1e-12 * lambda;
            for (k, s) in self.samples.iter().enumerate() {
                let a = self.node(k).abs();
                let inside = a >= 0.5 * lambda - slack && a <= 2.0 * lambda + slack;
                if !inside && (s.re != 0.0 || s.im != 0.0) {
                    return Err(LabError::Support(format!(
                        "sample at ξ = {} lies outside the band λ/2 ≤ |ξ| ≤ 2λ with λ = {lambda}",
                        self.node(k)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn band(&self) -> Option<f64> {
        self.band
    }

    pub fn profile(&self) -> Option<&Arc<dyn SpectrumProfile>> {
        self.profile.as_ref()
    }

    pub fn dxi(&self) -> f64 {
        (self.xi_max - self.xi_min) / (self.samples.len() - 1) as f64
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        self.xi_min + k as f64 * self.dxi()
    }

    /// Trapezoid weight of node `k` (½ at the two grid ends).
    #[inline]
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.samples.len() {
            0.5
        } else {
            1.0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|s| s.re == 0.0 && s.im == 0.0)
    }

    /// First and last index carrying a nonzero sample.
    pub fn nonzero_range(&self) -> Option<(usize, usize)> {
        let nz = |s: &Complex64| s.re != 0.0 || s.im != 0.0;
        let first = self.samples.iter().position(nz)?;
        let last = self.samples.iter().rposition(nz)?;
        Some((first, last))
    }

    /// Half of the spatial period `2π/Δξ` implied by the node spacing.
    pub fn spatial_half_period(&self) -> f64 {
        PI / self.dxi()
    }

    /// `(1/2π)∫|f̂|`, an upper bound for `|f|` and for every evolved slice.
    pub fn sup_bound(&self) -> f64 {
        let v: Vec<f64> = self.samples.iter().map(|s| s.norm()).collect();
        trapezoid_uniform(&v, self.dxi()) / (2.0 * PI)
    }

    pub fn l2_norm(&self) -> f64 {
        super::sobolev_norm(self, 0.0)
    }

    /// Refines the grid by an integer factor; the original nodes are kept.
    pub fn refined(&self, factor: usize) -> SpectralFunction {
        if factor <= 1 {
            return self.clone();
        }
        let n = self.samples.len();
        let n_fine = (n - 1) * factor + 1;
        let samples = match &self.profile {
            Some(p) => {
                let dxi = (self.xi_max - self.xi_min) / (n_fine - 1) as f64;
                (0..n_fine)
                    .map(|k| p.eval(self.xi_min + k as f64 * dxi))
                    .collect()
            }
            None => trig_refine(&self.samples, factor, n_fine),
        };
        SpectralFunction {
            xi_min: self.xi_min,
            xi_max: self.xi_max,
            samples,
            band: self.band,
            profile: self.profile.clone(),
        }
    }

    /// Same grid and profile with every sample multiplied pointwise.
    pub fn map_samples(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Vec<Complex64> {
        self.samples
            .iter()
            .enumerate()
            .map(|(k, &s)| f(self.node(k), s))
            .collect()
    }
}

/// Band-limited (in the conjugate variable) interpolation of one period of
/// samples, by zero-padding the discrete transform.
fn trig_refine(samples: &[Complex64], factor: usize, n_out: usize) -> Vec<Complex64> {
    let n = samples.len();
    let big = n * factor;
    let mut planner = FftPlanner::<f64>::new();
    let mut spec = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);

    let mut padded = vec![Complex64::new(0.0, 0.0); big];
    let half = n / 2;
    if n % 2 == 0 {
        padded[..half].copy_from_slice(&spec[..half]);
        for q in 1..half {
            padded[big - q] = spec[n - q];
        }
        // split the Nyquist bin symmetrically
        padded[half] = spec[half] * 0.5;
        padded[big - half] = spec[half] * 0.5;
    } else {
        padded[..=half].copy_from_slice(&spec[..=half]);
        for q in 1..=half {
            padded[big - q] = spec[n - q];
        }
    }
    planner.plan_fft_inverse(big).process(&mut padded);
    let scale = 1.0 / n as f64;
    padded.truncate(n_out);
    padded.iter_mut().for_each(|v| *v *= scale);
    padded
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_grids() {
        let ones = vec![Complex64::new(1.0, 0.0); 3];
        assert!(SpectralFunction::from_samples(1.0, 1.0, ones.clone(), None).is_err());
        assert!(SpectralFunction::from_samples(0.0, 1.0, vec![ones[0]], None).is_err());
        let mut bad = ones.clone();
        bad[1] = Complex64::new(f64::NAN, 0.0);
        assert!(SpectralFunction::from_samples(0.0, 1.0, bad, None).is_err());
    }

    #[test]
    fn band_convention_is_enforced() {
        // λ = 4: support must sit in 2 ≤ |ξ| ≤ 8
        let mut s = vec![Complex64::new(0.0, 0.0); 11];
        s[5] = Complex64::new(1.0, 0.0); // ξ = 5
        assert!(SpectralFunction::from_samples(0.0, 10.0, s.clone(), Some(4.0)).is_ok());
        s[1] = Complex64::new(1.0, 0.0); // ξ = 1
        assert!(matches!(
            SpectralFunction::from_samples(0.0, 10.0, s, Some(4.0)),
            Err(LabError::Support(_))
        ));
    }

    #[test]
    fn random_band_limited_respects_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = Arc::new(BumpSum::random_in_band(64.0, 6, &mut rng));
        let f = SpectralFunction::from_profile(p, -130.0, 130.0, 2049, Some(64.0));
        assert!(f.is_ok());
    }

    #[test]
    fn trig_refinement_keeps_original_nodes() {
        let g = GaussianProfile { cutoff: 10.0 };
        let coarse = SpectralFunction::from_profile(Arc::new(g), -10.0, 10.0, 81, None).unwrap();
        let plain = SpectralFunction::from_samples(-10.0, 10.0, coarse.samples().to_vec(), None).unwrap();
        let fine = plain.refined(4);
        assert_eq!(fine.len(), 321);
        for k in 0..coarse.len() {
            assert!((fine.samples()[4 * k] - coarse.samples()[k]).norm() < 1e-13);
        }
        // in-between nodes reproduce the Gaussian
        for k in 0..fine.len() {
            let xi = fine.node(k);
            assert!((fine.samples()[k].re - (-0.5 * xi * xi).exp()).abs() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn profile_refinement_is_exact() {
        let g = GaussianProfile { cutoff: 8.0 };
        let f = SpectralFunction::sample_profile(Arc::new(g), 33, None).unwrap();
        let fine = f.refined(3);
        for k in 0..fine.len() {
            let xi = fine.node(k);
            assert_eq!(fine.samples()[k], g.eval(xi));
        }
    }
}
