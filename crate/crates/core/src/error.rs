use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("support violation: {0}")]
    Support(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("point outside the admissible set: {0}")]
    Domain(String),

    #[error("root not bracketed for x = {x}: {reason}")]
    RootNotBracketed { x: f64, reason: String },

    #[error("parameters outside the theorem regime: {0}")]
    Regime(String),

    #[error("zero norm: {0}")]
    ZeroNorm(String),

    #[error("coincident points x = y = {0}")]
    Coincidence(f64),

    #[error("(alpha = {alpha}, gamma = {gamma}) is not covered by the beta table")]
    OutOfTable { alpha: f64, gamma: f64 },

    #[error("no theorem covers (alpha = {alpha}, m = {m})")]
    UncoveredHypothesis { alpha: String, m: String },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("unknown {kind} `{name}`; available: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl LabError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        LabError::InvalidInput {
            field,
            reason: reason.into(),
        }
    }
}
