use std::f64::consts::PI;

use super::spectrum::SpectralFunction;
use crate::summation::trapezoid_uniform;

/// `((1/2π)∫(1+ξ²)^s |f̂(ξ)|² dξ)^{1/2}` by the trapezoid rule on `f`'s grid.
pub fn sobolev_norm(f: &SpectralFunction, s: f64) -> f64 {
    let integrand = f.map_samples(|xi, v| {
        let w = if s == 0.0 { 1.0 } else { (1.0 + xi * xi).powf(s) };
        num_complex::Complex64::new(w * v.norm_sqr(), 0.0)
    });
    let values: Vec<f64> = integrand.iter().map(|v| v.re).collect();
    (trapezoid_uniform(&values, f.dxi()) / (2.0 * PI)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CounterexampleFamily;
    use num_complex::Complex64;

    #[test]
    fn indicator_on_unit_interval() {
        let n = 1001;
        let samples = vec![Complex64::new(1.0, 0.0); n];
        let f = SpectralFunction::from_samples(1.0, 2.0, samples, None).unwrap();
        assert!((sobolev_norm(&f, 0.0) - (1.0 / (2.0 * PI)).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn l2_norm_scaling_of_thm31() {
        let f = |r: f64| {
            CounterexampleFamily::thm31(0.25, 0.75, 0.01, r)
                .unwrap()
                .spectrum(129)
                .unwrap()
                .l2_norm()
        };
        assert!((f(64.0) / f(16.0) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn sobolev_slope_of_thm31() {
        let rs = [16.0, 32.0, 64.0, 128.0, 256.0];
        let pts: Vec<(f64, f64)> = rs
            .iter()
            .map(|&r| {
                let f = CounterexampleFamily::thm31(0.25, 0.75, 0.01, r).unwrap().spectrum(129).unwrap();
                (r.ln(), sobolev_norm(&f, 0.3).ln())
            })
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        assert!((sxy / sxx + 0.2).abs() < 0.02, "slope {}", sxy / sxx);
    }
}
