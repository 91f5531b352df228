//! Crate-wide error type.
//!
//! Errors fall into three groups, mirroring the CLI exit codes: input errors
//! (unparseable or schema-invalid scenarios, exit 2), hypothesis violations
//! (valid input whose mathematical preconditions fail, exit 3), and solver
//! failures (exit 4).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // --- input / scenario errors (exit 2) ---
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    // --- hypothesis / precondition violations (exit 3) ---
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid point for {kind} space: {reason}")]
    InvalidPoint { kind: &'static str, reason: String },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("antipodal sphere points: the minimizing geodesic is not unique")]
    AntipodalPoints,
    #[error("points must be distinct for this operation")]
    CoincidentPoints,
    #[error("finite spaces support distance lookups only")]
    FiniteUnsupported,
    #[error("point clouds live in different spaces or have incompatible sizes")]
    CloudMismatch,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid payoff: {0}")]
    InvalidPayoff(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    // --- solver failures (exit 4) ---
    #[error("solver failure: {0}")]
    Solver(String),
}

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Scenario(_) | Error::Json(_) | Error::Io(_) => 2,
            Error::Solver(_) => 4,
            _ => 3,
        }
    }
}
