use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::summation::pairwise_sum;

/// One time slice `h_t` on a uniform grid covering exactly one period of the
/// discrete synthesis.
///
/// Values are stored demodulated, `u_n = h_t(y_n)·e^{−i y_n ξ_c}`, so that
/// local interpolation only has to resolve the bandwidth of `f̂` and not its
/// absolute frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    t: f64,
    y_min: f64,
    dy: f64,
    carrier: f64,
    order: usize,
    baseband: Vec<Complex64>,
}

impl SampledField {
    pub(crate) fn new(t: f64, y_min: f64, dy: f64, carrier: f64, order: usize, baseband: Vec<Complex64>) -> Self {
        debug_assert!(baseband.len() > order);
        Self {
            t,
            y_min,
            dy,
            carrier,
            order,
            baseband,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.node(self.baseband.len() - 1)
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn len(&self) -> usize {
        self.baseband.len()
    }

    pub fn is_empty(&self) -> bool {
        self.baseband.is_empty()
    }

    /// Demodulation frequency `ξ_c`.
    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    #[inline]
    pub fn node(&self, n: usize) -> f64 {
        self.y_min + n as f64 * self.dy
    }

    /// `h_t(y_n)`.
    pub fn value(&self, n: usize) -> Complex64 {
        let y = self.node(n);
        self.baseband[n] * Complex64::from_polar(1.0, y * self.carrier)
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.len()).map(|n| self.value(n)).collect()
    }

    /// `‖h_t‖_{L²}` over one period, by the rectangle rule (exact for the
    /// trigonometric polynomial the slice represents).
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.baseband.iter().map(|v| v.norm_sqr()).collect();
        (pairwise_sum(&sq) * self.dy).sqrt()
    }

    /// `h_t(y)` by local Lagrange interpolation of the configured order.
    pub fn interpolate(&self, y: f64) -> Result<Complex64> {
        let npts = self.order + 1;
        let pos = (y - self.y_min) / self.dy;
        if !pos.is_finite() {
            return Err(LabError::Range(format!("query y = {y} is not finite")));
        }
        let cell = pos.floor();
        let start = cell - ((npts - 1) / 2) as f64;
        let last = self.len() as f64 - npts as f64;
        if start < 0.0 || start > last {
            return Err(LabError::Range(format!(
                "y = {y} leaves the slice grid [{}, {}] at t = {}",
                self.y_min,
                self.y_max(),
                self.t
            )));
        }
        let start = start as usize;
        let p = pos - start as f64;
        let u = &self.baseband[start..start + npts];
        let base = if p == p.floor() {
            u[p as usize]
        } else {
            // barycentric form on equispaced nodes
            let mut num = Complex64::new(0.0, 0.0);
            let mut den = 0.0;
            let mut w = 1.0;
            for (j, &uj) in u.iter().enumerate() {
                let c = w / (p - j as f64);
                num += uj * c;
                den += c;
                w *= -((npts - 1 - j) as f64) / (j + 1) as f64;
            }
            num / den
        };
        Ok(base * Complex64::from_polar(1.0, y * self.carrier))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(f: impl Fn(f64) -> Complex64, carrier: f64, order: usize) -> SampledField {
        let dy = 0.01;
        let y0 = -1.0;
        let vals = (0..201)
            .map(|n| {
                let y = y0 + n as f64 * dy;
                f(y) * Complex64::from_polar(1.0, -y * carrier)
            })
            .collect();
        SampledField::new(0.0, y0, dy, carrier, order, vals)
    }

    #[test]
    fn reproduces_polynomials_of_its_order() {
        let poly = |y: f64| Complex64::new(1.0 + y - 2.0 * y.powi(3) + 0.5 * y.powi(7), y.powi(2));
        let fld = field_of(poly, 0.0, 7);
        for &y in &[-0.8765, 0.0123, 0.5, 0.777] {
            assert!((fld.interpolate(y).unwrap() - poly(y)).norm() < 1e-12);
        }
    }

    #[test]
    fn carrier_is_restored() {
        let wave = |y: f64| Complex64::from_polar(1.0 + 0.1 * y, 300.0 * y + 0.7 * y * y);
        let fld = field_of(wave, 300.0, 7);
        for &y in &[-0.5, 0.123456, 0.71] {
            assert!((fld.interpolate(y).unwrap() - wave(y)).norm() < 1e-9);
            assert!((fld.value(100) - wave(fld.node(100))).norm() < 1e-12);
        }
    }

    #[test]
    fn out_of_grid_is_a_range_error() {
        let fld = field_of(|_| Complex64::new(1.0, 0.0), 0.0, 7);
        assert!(fld.interpolate(0.0).is_ok());
        assert!(matches!(fld.interpolate(-0.99), Err(LabError::Range(_))));
        assert!(matches!(fld.interpolate(5.0), Err(LabError::Range(_))));
        assert!(matches!(fld.interpolate(f64::NAN), Err(LabError::Range(_))));
    }
}
