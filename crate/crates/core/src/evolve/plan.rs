use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Mutex;

use super::field::SampledField;
use super::params::EvolutionParams;
use super::quadrature::effective_range;
use crate::domain::{CurveSpec, SpectralFunction};
use crate::error::{LabError, Result};

/// Tunables of the transform path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    /// Slice grid density relative to the Nyquist rate of the demodulated band.
    pub oversampling: usize,
    /// Local Lagrange interpolation order (odd).
    pub order: usize,
    /// Extra room around the curve image.
    pub margin: f64,
    /// Largest admissible transform length.
    pub max_len: usize,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            oversampling: 16,
            order: 7,
            margin: 0.5,
            max_len: 1 << 24,
        }
    }
}

/// Everything needed to synthesise `h_t` for any `t ∈ [0, 1]` on a grid that
/// contains every query `Γ(x, t)` with `x ∈ [−1, 1]`.
pub struct PropagationPlan {
    source: SpectralFunction,
    params: EvolutionParams,
    window: (f64, f64),
    config: PlanConfig,
    planner: Mutex<FftPlanner<f64>>,
}

impl std::fmt::Debug for PropagationPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PropagationPlan")
            .field("source", &self.source)
            .field("params", &self.params)
            .field("window", &self.window)
            .field("config", &self.config)
            .finish()
    }
}

impl PropagationPlan {
    pub fn new(source: SpectralFunction, params: EvolutionParams, curve: &CurveSpec, config: PlanConfig) -> Result<Self> {
        params.validate()?;
        if config.oversampling < 4 {
            return Err(LabError::Resolution(format!(
                "oversampling {} is below the required factor 4",
                config.oversampling
            )));
        }
        if config.order % 2 == 0 || config.order > 15 {
            return Err(LabError::invalid("order", "interpolation order must be odd and at most 15"));
        }
        if !(config.margin >= 0.0 && config.margin.is_finite()) {
            return Err(LabError::invalid("margin", "must be finite and nonnegative"));
        }
        let reach = 1.0 + curve.c3 + config.margin;
        let (img_lo, img_hi) = curve.image_bounds();
        let window = (
            (-reach).min(img_lo - config.margin),
            reach.max(img_hi + config.margin),
        );
        Ok(Self {
            source,
            params,
            window,
            config,
            planner: Mutex::new(FftPlanner::new()),
        })
    }

    pub fn with_defaults(source: SpectralFunction, params: EvolutionParams, curve: &CurveSpec) -> Result<Self> {
        Self::new(source, params, curve, PlanConfig::default())
    }

    pub fn source(&self) -> &SpectralFunction {
        &self.source
    }

    pub fn params(&self) -> &EvolutionParams {
        &self.params
    }

    pub fn config(&self) -> &PlanConfig {
        &self.config
    }

    /// Interval of positions that every slice is guaranteed to cover.
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    fn inverse_fft(&self, n: usize) -> Arc<dyn Fft<f64>> {
        self.planner.lock().expect("planner lock").plan_fft_inverse(n)
    }

    /// Samples of `h_t` by zero-padded inverse transform.
    ///
    /// The synthesis period is at least twice the diameter of the hull of the
    /// query window and the region the wave packets can reach by time `t`,
    /// so periodic images stay away from the window.
    pub fn propagate_slice(&self, t: f64) -> Result<SampledField> {
        if !(0.0..=1.0).contains(&t) {
            return Err(LabError::invalid("t", format!("must lie in [0, 1], got {t}")));
        }
        let f = &self.source;
        let p = &self.params;
        let order = self.config.order;
        let delta = p.damping_rate(t);
        let Some((lo, hi, cap)) = effective_range(f, p.m, delta) else {
            return Ok(self.zero_slice(t));
        };

        // group velocities of the live part of the spectrum
        let (mut v_min, mut v_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in lo..=hi {
            let v = p.symbol_derivative(f.node(k));
            v_min = v_min.min(v);
            v_max = v_max.max(v);
        }
        let tail = f.spatial_half_period();
        let hull_lo = self.window.0.min(-t * v_max - tail);
        let hull_hi = self.window.1.max(-t * v_min + tail);
        let diam = hull_hi - hull_lo;

        let dxi0 = f.dxi();
        let period0 = 2.0 * PI / dxi0;
        let k = ((2.0 * diam / period0).ceil() as usize).max(1);
        let dxi = dxi0 / k as f64;
        let period = k as f64 * period0;

        let j_end = (f.len() - 1) * k;
        let j0 = lo.saturating_sub(1) * k;
        let j1 = ((hi + 1) * k).min(j_end);
        let n_spec = j1 - j0 + 1;
        let n = (self.config.oversampling * n_spec).next_power_of_two().max(4 * (order + 1));
        if n > self.config.max_len {
            return Err(LabError::Range(format!(
                "covering [{hull_lo}, {hull_hi}] at t = {t} needs a transform of length {n}, above the limit {}",
                self.config.max_len
            )));
        }
        let dy = period / n as f64;
        let xi_first = f.xi_min() + j0 as f64 * dxi;
        let xi_last = f.xi_min() + j1 as f64 * dxi;
        let carrier = 0.5 * (xi_first + xi_last);
        let half_band = 0.5 * (xi_last - xi_first);
        if half_band > 0.0 && dy > PI / (2.0 * half_band) {
            return Err(LabError::Resolution(format!(
                "slice spacing {dy} violates the Nyquist bound {} for the demodulated band",
                PI / (2.0 * half_band)
            )));
        }
        let y0 = hull_lo - 0.5 * (period - diam);

        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        let coarse = if k == 1 || f.profile().is_some() { None } else { Some(f.refined(k)) };
        for j in j0..=j1 {
            let xi = f.xi_min() + j as f64 * dxi;
            let amp = match (&coarse, f.profile()) {
                _ if k == 1 => f.samples()[j],
                (Some(r), _) => r.samples()[j],
                (None, Some(prof)) => prof.eval(xi),
                (None, None) => unreachable!(),
            };
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let w = if j == 0 || j == j_end { 0.5 } else { 1.0 };
            let q = j - j0;
            let s = p.symbol(xi);
            let damp = delta * s;
            if damp > cap {
                continue;
            }
            buf[q] = amp * Complex64::from_polar(w * (-damp).exp(), t * s + y0 * (q as f64 * dxi));
        }
        self.inverse_fft(n).process(&mut buf);

        let scale = dxi / (2.0 * PI);
        let shift = xi_first - carrier;
        for (m, v) in buf.iter_mut().enumerate() {
            let y = y0 + m as f64 * dy;
            *v *= Complex64::from_polar(scale, y * shift);
        }
        Ok(SampledField::new(t, y0, dy, carrier, order, buf))
    }

    /// Slice of an extinct or vanishing spectrum.
    fn zero_slice(&self, t: f64) -> SampledField {
        let n = 4 * (self.config.order + 1);
        let (a, b) = self.window;
        let pad = 0.5 * (b - a);
        let dy = (b - a + 2.0 * pad) / (n - 1) as f64;
        SampledField::new(t, a - pad, dy, 0.0, self.config.order, vec![Complex64::new(0.0, 0.0); n])
    }
}
