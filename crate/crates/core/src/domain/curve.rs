use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Piecewise-bilinear curve `Γ(x, t)` given on a rectangular `(x, t)` table.
///
/// `values[j][i]` is `Γ(x_i, t_j)`. The first time node must be `0` and the
/// first row must reproduce the `x` nodes, so that `Γ(x, 0) = x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedCurve {
    x_nodes: Vec<f64>,
    t_nodes: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TabulatedCurve {
    pub fn new(x_nodes: Vec<f64>, t_nodes: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let increasing = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&x_nodes) || x_nodes.iter().any(|v| !v.is_finite()) {
            return Err(LabError::invalid("x_nodes", "need at least two strictly increasing finite nodes"));
        }
        if !increasing(&t_nodes) || t_nodes.iter().any(|v| !v.is_finite()) {
            return Err(LabError::invalid("t_nodes", "need at least two strictly increasing finite nodes"));
        }
        if t_nodes[0] != 0.0 {
            return Err(LabError::invalid("t_nodes", "the first time node must be 0"));
        }
        if values.len() != t_nodes.len() || values.iter().any(|row| row.len() != x_nodes.len()) {
            return Err(LabError::invalid("values", "table shape must be t_nodes × x_nodes"));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(LabError::invalid("values", "all entries must be finite"));
        }
        let scale = x_nodes.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        if values[0].iter().zip(&x_nodes).any(|(g, x)| (g - x).abs() > 1e-12 * scale) {
            return Err(LabError::invalid("values", "the t = 0 row must equal the x nodes"));
        }
        Ok(Self {
            x_nodes,
            t_nodes,
            values,
        })
    }

    /// Tabulates `f` on the given nodes.
    pub fn sample(x_nodes: Vec<f64>, t_nodes: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = t_nodes
            .iter()
            .map(|&t| x_nodes.iter().map(|&x| if t == 0.0 { x } else { f(x, t) }).collect())
            .collect();
        Self::new(x_nodes, t_nodes, values)
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x_nodes[0], *self.x_nodes.last().unwrap())
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t_nodes[0], *self.t_nodes.last().unwrap())
    }

    pub fn value_range(&self) -> (f64, f64) {
        self.values.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }

    fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let (x0, x1) = self.x_range();
        let (t0, t1) = self.t_range();
        if !(x >= x0 && x <= x1 && t >= t0 && t <= t1) {
            return Err(LabError::Range(format!(
                "(x, t) = ({x}, {t}) lies outside the table [{x0}, {x1}] × [{t0}, {t1}]"
            )));
        }
        if t == 0.0 {
            return Ok(x);
        }
        let (i, u) = locate(&self.x_nodes, x);
        let (j, v) = locate(&self.t_nodes, t);
        let g = |jj: usize, ii: usize| self.values[jj][ii];
        let lower = g(j, i) + u * (g(j, i + 1) - g(j, i));
        let upper = g(j + 1, i) + u * (g(j + 1, i + 1) - g(j + 1, i));
        Ok(lower + v * (upper - lower))
    }
}

/// Cell index and local coordinate in `[0, 1]` for a point inside the nodes.
fn locate(nodes: &[f64], p: f64) -> (usize, f64) {
    let k = nodes.partition_point(|&n| n <= p).clamp(1, nodes.len() - 1) - 1;
    (k, (p - nodes[k]) / (nodes[k + 1] - nodes[k]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CurveFamily {
    /// `Γ(x, t) = x`.
    Identity,
    /// `Γ(x, t) = x − t`.
    Shear,
    /// `Γ(x, t) = x − t^α`.
    HolderTangent,
    Tabulated(Arc<TabulatedCurve>),
}

impl CurveFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CurveFamily::Identity => "identity",
            CurveFamily::Shear => "shear",
            CurveFamily::HolderTangent => "holder_tangent",
            CurveFamily::Tabulated(_) => "tabulated",
        }
    }
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A curve family with its declared Hölder exponent and regularity constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: CurveFamily,
    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CurveSpec {
    pub fn new(family: CurveFamily, alpha: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(LabError::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
        }
        if !(c1 > 0.0 && c1 <= c2 && c2.is_finite()) {
            return Err(LabError::invalid("c1", "need 0 < c1 ≤ c2 < ∞"));
        }
        if !(c3 >= 0.0 && c3.is_finite()) {
            return Err(LabError::invalid("c3", "must be finite and nonnegative"));
        }
        Ok(Self {
            family,
            alpha,
            c1,
            c2,
            c3,
        })
    }

    pub fn identity() -> Self {
        Self::new(CurveFamily::Identity, 1.0, 1.0, 1.0, 0.0).expect("valid")
    }

    pub fn shear() -> Self {
        Self::new(CurveFamily::Shear, 1.0, 1.0, 1.0, 1.0).expect("valid")
    }

    pub fn holder_tangent(alpha: f64) -> Result<Self> {
        Self::new(CurveFamily::HolderTangent, alpha, 1.0, 1.0, 1.0)
    }

    pub fn tabulated(table: TabulatedCurve, alpha: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::new(CurveFamily::Tabulated(Arc::new(table)), alpha, c1, c2, c3)
    }

    /// Built-in family by name, with its natural constants.
    pub fn builtin(name: &str, alpha: f64) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "shear" => Ok(Self::shear()),
            "holder_tangent" => Self::holder_tangent(alpha),
            "tabulated" => Err(LabError::invalid("curve", "a tabulated curve needs its table")),
            other => Err(LabError::UnknownStrategy {
                kind: "curve family",
                name: other.to_string(),
                available: "identity, shear, holder_tangent, tabulated".into(),
            }),
        }
    }

    /// `Γ(x, t)`; exactly `x` at `t = 0`.
    #[inline]
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(LabError::invalid("t", format!("must lie in [0, 1], got {t}")));
        }
        if t == 0.0 {
            return match &self.family {
                CurveFamily::Tabulated(tab) => tab.eval(x, 0.0),
                _ => Ok(x),
            };
        }
        match &self.family {
            CurveFamily::Identity => Ok(x),
            CurveFamily::Shear => Ok(x - t),
            CurveFamily::HolderTangent => Ok(x - t.powf(self.alpha)),
            CurveFamily::Tabulated(tab) => tab.eval(x, t),
        }
    }

    /// Range of `Γ` over `[−1, 1] × [0, 1]`.
    pub fn image_bounds(&self) -> (f64, f64) {
        match &self.family {
            CurveFamily::Identity => (-1.0, 1.0),
            CurveFamily::Shear | CurveFamily::HolderTangent => (-2.0, 1.0),
            CurveFamily::Tabulated(tab) => tab.value_range(),
        }
    }
}

impl FromStr for CurveFamily {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        CurveSpec::builtin(s, 1.0).map(|c| c.family)
    }
}

/// Test points for the sampled regularity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub xs: Vec<f64>,
    pub ts: Vec<f64>,
}

impl Lattice {
    pub fn new(xs: Vec<f64>, ts: Vec<f64>) -> Result<Self> {
        if xs.is_empty() || ts.is_empty() {
            return Err(LabError::invalid("lattice", "needs at least one x and one t node"));
        }
        if xs.iter().any(|x| !(-1.0..=1.0).contains(x)) || ts.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(LabError::invalid("lattice", "nodes must lie in [−1, 1] × [0, 1]"));
        }
        Ok(Self { xs, ts })
    }

    /// `nx` uniform x nodes and `nt` time nodes; the time nodes combine a
    /// uniform grid with a geometric cluster at 0 so small-time Hölder
    /// behaviour is witnessed.
    pub fn uniform(nx: usize, nt: usize) -> Self {
        let nx = nx.max(2);
        let nt = nt.max(2);
        let xs = (0..nx).map(|i| -1.0 + 2.0 * i as f64 / (nx - 1) as f64).collect();
        let mut ts: Vec<f64> = (0..nt).map(|j| j as f64 / (nt - 1) as f64).collect();
        ts.extend((1..=40).map(|k| 2f64.powi(-k)));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        Self { xs, ts }
    }
}

impl Default for Lattice {
    fn default() -> Self {
        Self::uniform(41, 65)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub bilipschitz_ok: bool,
    pub holder_ok: bool,
    /// Smallest witnessed `|Γ(x,t) − Γ(x′,t)| / |x − x′|`.
    pub c1_empirical: f64,
    /// Largest witnessed `|Γ(x,t) − Γ(x′,t)| / |x − x′|`.
    pub c2_empirical: f64,
    /// Largest witnessed `|Γ(x,t) − Γ(x,t′)| / |t − t′|^α`.
    pub c3_empirical: f64,
}

/// Empirical regularity constants of `curve` over `lattice`, compared with the
/// declared ones. Points where the curve cannot be evaluated count as
/// failures of both checks.
pub fn verify_curve_regularity(curve: &CurveSpec, lattice: &Lattice) -> RegularityReport {
    let n_x = lattice.xs.len();
    let n_t = lattice.ts.len();
    let mut grid = vec![f64::NAN; n_x * n_t];
    let mut eval_ok = true;
    for (j, &t) in lattice.ts.iter().enumerate() {
        for (i, &x) in lattice.xs.iter().enumerate() {
            match curve.eval(x, t) {
                Ok(v) => grid[j * n_x + i] = v,
                Err(_) => eval_ok = false,
            }
        }
    }

    // Differences of computed values carry an absolute rounding error of a
    // few ulps of the largest |Γ|; pairs are judged with that allowance.
    let slack = 8.0 * f64::EPSILON * grid.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut lip_ok = true;
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0_f64;
    for j in 0..n_t {
        let row = &grid[j * n_x..(j + 1) * n_x];
        for a in 0..n_x {
            for b in a + 1..n_x {
                let dx = (lattice.xs[a] - lattice.xs[b]).abs();
                if dx == 0.0 {
                    continue;
                }
                let d = (row[a] - row[b]).abs();
                lip_ok &= d + slack >= curve.c1 * dx && d <= curve.c2 * dx + slack;
                let r = d / dx;
                c1 = c1.min(r);
                c2 = c2.max(r);
            }
        }
    }

    let mut hol_ok = true;
    let mut c3 = 0.0_f64;
    for i in 0..n_x {
        for a in 0..n_t {
            for b in a + 1..n_t {
                let dt = (lattice.ts[a] - lattice.ts[b]).abs();
                if dt == 0.0 {
                    continue;
                }
                let d = (grid[a * n_x + i] - grid[b * n_x + i]).abs();
                let scale = dt.powf(curve.alpha);
                hol_ok &= d <= curve.c3 * scale + slack;
                c3 = c3.max(d / scale);
            }
        }
    }

    let bilipschitz_ok = eval_ok && lip_ok;
    let holder_ok = eval_ok && hol_ok;
    RegularityReport {
        bilipschitz_ok,
        holder_ok,
        c1_empirical: if c1.is_infinite() { f64::NAN } else { c1 },
        c2_empirical: c2,
        c3_empirical: c3,
    }
}
