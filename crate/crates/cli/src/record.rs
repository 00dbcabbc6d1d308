use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Command, RunConfig};

/// A measured quantity checked against its prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    pub tolerance: f64,
    /// How `measured` is compared: `abs`, `le` or `ge`.
    pub rule: String,
    pub pass: bool,
}

impl Verdict {
    pub fn within(name: &str, measured: f64, predicted: f64, tolerance: f64) -> Self {
        Self::make(name, measured, predicted, tolerance, "abs", (measured - predicted).abs() <= tolerance)
    }

    /// `measured ≤ predicted + tolerance`.
    pub fn at_most(name: &str, measured: f64, predicted: f64, tolerance: f64) -> Self {
        Self::make(name, measured, predicted, tolerance, "le", measured <= predicted + tolerance)
    }

    /// `measured ≥ predicted`.
    pub fn at_least(name: &str, measured: f64, predicted: f64) -> Self {
        Self::make(name, measured, predicted, 0.0, "ge", measured >= predicted)
    }

    fn make(name: &str, measured: f64, predicted: f64, tolerance: f64, rule: &str, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            measured,
            predicted,
            tolerance,
            rule: rule.to_string(),
            pass,
        }
    }
}

/// Rows for CSV output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub command: Command,
    /// Fully resolved configuration; running it again reproduces this record.
    pub config: RunConfig,
    pub measurements: Value,
    pub predictions: Value,
    pub verdicts: Vec<Verdict>,
    pub errors: Vec<String>,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(skip)]
    pub table: Table,
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}
