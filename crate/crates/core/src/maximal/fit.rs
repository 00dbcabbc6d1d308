use serde::Serialize;

use crate::error::{LabError, Result};

/// Residuals below this (in natural-log units) never trigger the drop rule.
const RESIDUAL_FLOOR: f64 = 1e-9;

/// Least-squares line through `(ln scale, ln value)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Points used in the fit, in log-log coordinates.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    /// The smallest-scale point, if the transient guard removed it.
    pub dropped: Option<(f64, f64)>,
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64, Vec<f64>) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = points.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    (slope, intercept, residuals)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Log-log regression of a positive series over strictly increasing scales.
///
/// The smallest scale is dropped once if its residual exceeds three times
/// the median absolute residual and at least four points remain.
pub fn fit_slope(series: &[(f64, f64)]) -> Result<ExponentFit> {
    if series.len() < 4 {
        return Err(LabError::DegenerateSeries(format!("need at least 4 points, got {}", series.len())));
    }
    if let Some(&(s, v)) = series.iter().find(|&&(s, v)| !(s > 0.0 && v > 0.0 && s.is_finite() && v.is_finite())) {
        return Err(LabError::DegenerateSeries(format!("non-positive or non-finite point ({s}, {v})")));
    }
    if series.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(LabError::DegenerateSeries("scales must be strictly increasing".into()));
    }
    let mut points: Vec<(f64, f64)> = series.iter().map(|&(s, v)| (s.ln(), v.ln())).collect();
    let (mut slope, mut intercept, mut residuals) = least_squares(&points);
    let mut dropped = None;
    if points.len() > 4 {
        let abs: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
        if abs[0] > 3.0 * median(&abs) && abs[0] > RESIDUAL_FLOOR {
            dropped = Some(series[0]);
            points.remove(0);
            (slope, intercept, residuals) = least_squares(&points);
        }
    }
    let max_residual = residuals.iter().fold(0.0_f64, |a, r| a.max(r.abs()));
    Ok(ExponentFit {
        points,
        slope,
        intercept,
        max_residual,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = (4..=8).map(|k| {
            let x = 2f64.powi(k);
            (x, 3.0 * x.powf(0.25))
        }).collect();
        let fit = fit_slope(&s).unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_series() {
        let s: Vec<(f64, f64)> = (1..=6).map(|k| (k as f64, 2.5)).collect();
        let fit = fit_slope(&s).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!(fit.dropped.is_none());
    }

    #[test]
    fn transient_point_is_dropped() {
        let mut s: Vec<(f64, f64)> = (4..=11).map(|k| {
            let x = 2f64.powi(k);
            (x, x.powf(0.5) * (1.0 + 0.01 * (k as f64).sin()))
        }).collect();
        s[0].1 *= 0.2;
        let fit = fit_slope(&s).unwrap();
        assert_eq!(fit.dropped, Some(s[0]));
        assert_eq!(fit.points.len(), 7);
        assert!((fit.slope - 0.5).abs() < 0.02);
    }

    #[test]
    fn degenerate_series() {
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
        assert!(fit_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 1.0)]).is_err());
        assert!(fit_slope(&[(1.0, 1.0), (1.0, 2.0), (3.0, 3.0), (4.0, 1.0)]).is_err());
    }
}
