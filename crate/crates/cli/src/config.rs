use std::fmt;
use std::path::PathBuf;

use ctlab_core::atlas::parse_rational;
use ctlab_core::maximal::QConfig;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Atlas,
    Sweep,
    Lowerbound,
    Kernelcheck,
    Eval,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Atlas => "atlas",
            Command::Sweep => "sweep",
            Command::Lowerbound => "lowerbound",
            Command::Kernelcheck => "kernelcheck",
            Command::Eval => "eval",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A number given either as a JSON number or as a string such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_f64(&self, field: &'static str) -> Result<f64, ConfigError> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => Ok(ctlab_core::atlas::Scalar::to_f64(&self.to_rational(field)?)).and_then(|v: f64| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(ConfigError::new(field, format!("`{s}` is not a finite number")))
                }
            }),
        }
    }

    /// Exact value; floats are read through their shortest decimal form.
    pub fn to_rational(&self, field: &'static str) -> Result<BigRational, ConfigError> {
        let text = match self {
            Number::Float(v) if v.is_finite() => format!("{v}"),
            Number::Float(v) => return Err(ConfigError::new(field, format!("{v} is not finite"))),
            Number::Text(s) => s.clone(),
        };
        parse_rational(&text).map_err(|_| ConfigError::new(field, format!("cannot read `{text}` as a number")))
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Sobolev order of the denominator of `Q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Counterexample family: `thm31` or `thm32`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
}

/// One run, read from a JSON document and/or command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    /// `R` values for `sweep`/`lowerbound`, `λ` values for `kernelcheck`/`eval`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scales: Vec<f64>,
    /// γ values for an atlas profile.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<Number>,
    /// `λ` values of the Schur-integral sweep in `kernelcheck`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schur_scales: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<QConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub calibrate: bool,
    #[serde(default)]
    pub continuity: bool,
    /// `selector` or `time_zero`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// Multiplier applied to `f̂` before the lower-bound evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub xs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ts: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: Params::default(),
            scales: Vec::new(),
            gammas: Vec::new(),
            schur_scales: Vec::new(),
            grid: None,
            seed: None,
            count: None,
            tolerance: None,
            calibrate: false,
            continuity: false,
            witness: None,
            nodes: None,
            amplitude: None,
            xs: Vec::new(),
            ts: Vec::new(),
            propagator: None,
            out: None,
            format: Format::Csv,
        }
    }

    /// Parses a JSON document; errors carry line and column.
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            field: "config".into(),
            reason: format!("{origin}:{}:{}: {e}", e.line(), e.column()),
        })
    }

    pub fn require<'a, T>(value: &'a Option<T>, field: &'static str) -> Result<&'a T, ConfigError> {
        value.as_ref().ok_or_else(|| ConfigError::new(field, "is required for this command"))
    }

    /// Command-independent checks.
    pub fn validate(&self) -> Result<(), ConfigError> {
        check_scales("scales", &self.scales)?;
        check_scales("schur_scales", &self.schur_scales)?;
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(ConfigError::new("tolerance", format!("must be positive, got {t}")));
            }
        }
        if let Some(a) = &self.params.alpha {
            let v = a.to_f64("params.alpha")?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(ConfigError::new("params.alpha", format!("must lie in (0, 1], got {v}")));
            }
        }
        if let Some(g) = &self.params.gamma {
            let v = g.to_f64("params.gamma")?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new("params.gamma", format!("must be positive, got {v}")));
            }
        }
        if let Some(m) = &self.params.m {
            let v = m.to_f64("params.m")?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new("params.m", format!("must be positive, got {v}")));
            }
        }
        if let Some(c) = self.params.c {
            if !(c > 0.0 && c < 1.0) {
                return Err(ConfigError::new("params.c", format!("must lie in (0, 1), got {c}")));
            }
        }
        for (k, g) in self.gammas.iter().enumerate() {
            let v = g.to_f64("gammas")?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::new("gammas", format!("entry {k} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn check_scales(field: &'static str, scales: &[f64]) -> Result<(), ConfigError> {
    if let Some(v) = scales.iter().find(|v| !(**v >= 4.0 && v.is_finite())) {
        return Err(ConfigError::new(field, format!("every scale must be at least 4, got {v}")));
    }
    if scales.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ConfigError::new(field, "scales must be strictly increasing"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let c = RunConfig::from_json(
            r#"{"command": "atlas", "params": {"alpha": "1/3", "gamma": 1.2, "m": 2}}"#,
            "inline",
        )
        .unwrap();
        c.validate().unwrap();
        assert_eq!(c.params.alpha.as_ref().unwrap().to_rational("a").unwrap(), parse_rational("1/3").unwrap());
        assert_eq!(c.params.gamma.as_ref().unwrap().to_rational("g").unwrap(), parse_rational("6/5").unwrap());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let c = RunConfig::from_json(r#"{"command": "atlas", "params": {"alpha": 0}}"#, "x").unwrap();
        assert_eq!(c.validate().unwrap_err().field, "params.alpha");
        let e = RunConfig::from_json("{\n \"command\": \"atlas\",\n \"bogus\": 1}", "cfg.json").unwrap_err();
        assert!(e.reason.starts_with("cfg.json:3:"), "{}", e.reason);
        assert!(e.reason.contains("bogus"));
        let mut c = RunConfig::new(Command::Sweep);
        c.scales = vec![16.0, 8.0];
        assert_eq!(c.validate().unwrap_err().field, "scales");
        c.scales = vec![2.0];
        assert_eq!(c.validate().unwrap_err().field, "scales");
    }
}
