use std::borrow::Cow;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::params::{pow_abs, EvolutionParams};
use crate::domain::SpectralFunction;
use crate::summation::pairwise_sum;

/// Nodes damped by more than `e^{−40}` relative to the least damped live node
/// are dropped.
pub(crate) const EXTINCTION: f64 = 40.0;

/// Largest admissible phase increment per quadrature step.
const MAX_STEP_PHASE: f64 = PI / 8.0;

/// Live part of `f` under damping `e^{−δ|ξ|^m}`: the inclusive index range on
/// `f`'s own grid and the largest damping exponent kept.
pub(crate) fn effective_range(f: &SpectralFunction, m: f64, delta: f64) -> Option<(usize, usize, f64)> {
    let (first, last) = f.nonzero_range()?;
    if delta <= 0.0 {
        return Some((first, last, f64::INFINITY));
    }
    let s = f.samples();
    let nonzero = |k: &usize| s[*k].re != 0.0 || s[*k].im != 0.0;
    let least = (first..=last)
        .filter(nonzero)
        .map(|k| delta * pow_abs(f.node(k), m))
        .fold(f64::INFINITY, f64::min);
    let cap = least + EXTINCTION;
    let alive = |k: usize| nonzero(&k) && delta * pow_abs(f.node(k), m) <= cap;
    let lo = (first..=last).find(|&k| alive(k))?;
    let hi = (lo..=last).rev().find(|&k| alive(k))?;
    Some((lo, hi, cap))
}

/// `sup |∂ξ|ξ|^m|` over the nodes `lo..=hi` of `f`, ignoring a node at the
/// origin (where the symbol is continuous but its derivative is not).
pub(crate) fn symbol_slope_bound(f: &SpectralFunction, m: f64, lo: usize, hi: usize) -> f64 {
    let a = f.node(lo);
    let b = f.node(hi);
    if m >= 1.0 {
        return m * pow_abs(a.abs().max(b.abs()), m - 1.0);
    }
    // m < 1: the derivative is largest at the node nearest the origin
    let nearest = if a > 0.0 {
        a
    } else if b < 0.0 {
        -b
    } else {
        let dxi = f.dxi();
        let k0 = ((-a) / dxi).floor() as usize + lo;
        [k0, k0 + 1]
            .iter()
            .filter(|&&k| k <= hi)
            .map(|&k| f.node(k).abs())
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min)
            .min(dxi)
    };
    if nearest.is_finite() && nearest > 0.0 {
        m * pow_abs(nearest, m - 1.0)
    } else {
        0.0
    }
}

/// `sup over supp f̂ of |∂ξ(yξ + t|ξ|^m)| = |y| + t·sup|m|ξ|^{m−1}|`.
pub fn max_phase_rate(f: &SpectralFunction, params: &EvolutionParams, y: f64, t: f64) -> f64 {
    match f.nonzero_range() {
        None => y.abs(),
        Some((lo, hi)) => y.abs() + t.abs() * symbol_slope_bound(f, params.m, lo, hi),
    }
}

/// `(1/2π)∫ e^{i(yξ + τ|ξ|^m)}·e^{−δ|ξ|^m}·f̂(ξ) dξ` by the trapezoid rule on a
/// nested refinement of `f`'s grid fine enough that the phase advances by at
/// most π/8 per step.
pub(crate) fn oscillatory_sum(f: &SpectralFunction, m: f64, y: f64, tau: f64, delta: f64) -> Complex64 {
    let Some((lo, hi, cap)) = effective_range(f, m, delta) else {
        return Complex64::new(0.0, 0.0);
    };
    let rate = y.abs() + tau.abs() * symbol_slope_bound(f, m, lo, hi);
    let dxi0 = f.dxi();
    let k = ((dxi0 * rate / MAX_STEP_PHASE).ceil() as usize).max(1);
    let dxi = dxi0 / k as f64;

    // refined nodes strictly between a vanishing coarse neighbour and the
    // first live coarse node can be nonzero, so widen by one coarse cell
    let j0 = lo.saturating_sub(1) * k;
    let j_end = (f.len() - 1) * k;
    let j1 = ((hi + 1) * k).min(j_end);
    let xi_min = f.xi_min();

    let refined: Option<Cow<'_, [Complex64]>> = match (f.profile(), k) {
        (_, 1) => Some(Cow::Borrowed(f.samples())),
        (Some(_), _) => None,
        (None, _) => Some(Cow::Owned(f.refined(k).samples().to_vec())),
    };
    let terms: Vec<Complex64> = (j0..=j1)
        .map(|j| {
            let xi = xi_min + j as f64 * dxi;
            let amp = match (&refined, f.profile()) {
                (Some(s), _) => s[j],
                (None, Some(p)) => p.eval(xi),
                (None, None) => unreachable!(),
            };
            if amp.re == 0.0 && amp.im == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let s = pow_abs(xi, m);
            let w = if j == 0 || j == j_end { 0.5 } else { 1.0 };
            let damp = delta * s;
            if damp > cap {
                return Complex64::new(0.0, 0.0);
            }
            amp * Complex64::from_polar(w * (-damp).exp(), y * xi + tau * s)
        })
        .collect();
    pairwise_sum(&terms) * (dxi / (2.0 * PI))
}

/// Slow trusted evaluation of `h_t(y) = (1/2π)∫ e^{i(yξ + t|ξ|^m)} D(t,ξ) f̂(ξ) dξ`.
pub fn direct_quadrature(f: &SpectralFunction, params: &EvolutionParams, y: f64, t: f64) -> Complex64 {
    oscillatory_sum(f, params.m, y, t, params.damping_rate(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{CounterexampleFamily, GaussianProfile, SpectrumProfile};
    use std::sync::Arc;

    fn schrodinger() -> EvolutionParams {
        EvolutionParams::new(2.0, 1.0, false).unwrap()
    }

    #[test]
    fn zero_spectrum_gives_zero() {
        let f = SpectralFunction::from_samples(1.0, 2.0, vec![Complex64::new(0.0, 0.0); 8], None).unwrap();
        assert_eq!(direct_quadrature(&f, &schrodinger(), 0.3, 0.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn origin_value_is_mean_of_spectrum() {
        let f = CounterexampleFamily::thm31(0.5, 1.0, 0.01, 16.0).unwrap().spectrum(129).unwrap();
        let v = direct_quadrature(&f, &schrodinger(), 0.0, 0.0);
        // ∫ f̂ = ∫ g = 1
        assert!((v.re - 1.0 / (2.0 * PI)).abs() < 1e-12 && v.im.abs() < 1e-15);
    }

    #[test]
    fn half_wave_transport() {
        let f = CounterexampleFamily::thm31(0.5, 1.0, 0.01, 16.0).unwrap().spectrum(129).unwrap();
        let p = EvolutionParams::new(1.0, 1.0, false).unwrap();
        let at_origin = direct_quadrature(&f, &p, 0.0, 0.0);
        for &t in &[0.1, 0.37, 0.9] {
            let v = direct_quadrature(&f, &p, -t, t);
            assert!((v - at_origin).norm() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn phase_rates() {
        let lambda = 16.0;
        let band = SpectralFunction::from_samples(
            0.5 * lambda,
            2.0 * lambda,
            vec![Complex64::new(1.0, 0.0); 97],
            Some(lambda),
        )
        .unwrap();
        let p2 = schrodinger();
        assert_eq!(max_phase_rate(&band, &p2, 0.0, 0.0), 0.0);
        assert!((max_phase_rate(&band, &p2, -0.5, 1.0) - (0.5 + 4.0 * lambda)).abs() < 1e-12);
        let ph = EvolutionParams::new(0.5, 1.0, false).unwrap();
        let expect = 0.25 + 0.5 * (0.5 * lambda).powf(-0.5);
        assert!((max_phase_rate(&band, &ph, 0.25, 1.0) - expect).abs() < 1e-14);
    }

    #[test]
    fn gaussian_closed_form() {
        let g = GaussianProfile { cutoff: 12.0 };
        let f = SpectralFunction::sample_profile(Arc::new(g), 2001, None).unwrap();
        assert!(g.eval(13.0).norm() == 0.0);
        let p = EvolutionParams::new(2.0, 0.7, true).unwrap();
        for &(y, t) in &[(0.0, 0.0), (0.4, 0.3), (-1.3, 0.8), (2.0, 1.0)] {
            let a = Complex64::new(0.5 + if t > 0.0 { f64::powf(t, 0.7) } else { 0.0 }, -t);
            let exact = (PI / a).sqrt() * (-(y * y) / (4.0 * a)).exp() / (2.0 * PI);
            let v = direct_quadrature(&f, &p, y, t);
            assert!((v - exact).norm() <= 1e-10 * exact.norm(), "({y}, {t}): {v} vs {exact}");
        }
    }
}
