use thiserror::Error;

/// Recoverable error conditions surfaced by the library.
///
/// Contract violations (dimension mismatches, out-of-range indices) panic
/// instead; they indicate caller bugs, not runtime conditions.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("population size {np} is below the minimum {min} required by {context}")]
    PopulationTooSmall {
        np: usize,
        min: usize,
        context: String,
    },

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("non-finite coordinate at index {index}: {value}")]
    NonFiniteCoordinate { index: usize, value: f64 },

    #[error(
        "requested {requested} distinct indices but only {available} candidates are available"
    )]
    NotEnoughCandidates { requested: usize, available: usize },

    #[error("objective returned NaN at position {position:?}")]
    ObjectiveNan { position: Vec<f64> },

    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("unknown function '{name}' (valid: {valid})")]
    UnknownFunction { name: String, valid: String },

    #[error("unknown parameter policy '{0}' (valid: jde, fixed:F=<v>,CR=<v>)")]
    UnknownParamPolicy(String),

    #[error("shift file {path}: {reason}")]
    ShiftFile { path: String, reason: String },

    #[error("paired samples have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
}
