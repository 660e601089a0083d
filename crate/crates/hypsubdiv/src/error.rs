//! Crate-wide error type. Every failure carries enough context to act as a
//! machine-readable witness; nothing is silently truncated or clamped.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid presentation: {reason}")]
    PresentationInvalid { reason: String },

    #[error("ball enumeration exceeds the configured cap of {cap} elements")]
    BallTooLarge { cap: usize },

    #[error("element {word:?} lies outside the precomputed ball of radius {radius}")]
    OutOfBall { word: String, radius: u32 },

    #[error("boundary of a 0-chain is undefined; use the augmentation")]
    DimensionZero,

    #[error("expected a chain of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("empty tuple")]
    EmptyTuple,

    #[error("simplex {simplex:?} has diameter {diameter} exceeding the Rips radius {radius}")]
    RipsViolation {
        simplex: String,
        diameter: String,
        radius: String,
    },

    #[error("output of f_{dim} violates the radius schedule: {detail}")]
    RadiusScheduleExceeded { dim: usize, detail: String },

    #[error("vertex {word:?} is not covered by the supplied vertex map")]
    VertexNotInHull { word: String },

    #[error("stage-2 clamp constraint failed at the configured delta: {detail}")]
    TreeApproximationDiagnostic { detail: String },

    #[error("chain homotopy identity failed on {witness}")]
    HomotopyIdentityFailed { witness: String },

    #[error("basis is not closed under faces: face {face:?} of {simplex:?} is missing in dimension {dim}")]
    BasisNotClosed {
        simplex: String,
        face: String,
        dim: usize,
    },

    #[error("invalid metric space: {reason}")]
    MetricInvalid { reason: String },

    #[error("invalid input: {reason}")]
    InvalidInput { reason: String },

    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },

    #[error("json error at {path}: {message}")]
    Json { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable kind tag used by the CLI error envelope.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PresentationInvalid { .. } => "presentation_invalid",
            Error::BallTooLarge { .. } => "ball_too_large",
            Error::OutOfBall { .. } => "out_of_ball",
            Error::DimensionZero => "dimension_zero",
            Error::WrongDimension { .. } => "wrong_dimension",
            Error::EmptyTuple => "empty_tuple",
            Error::RipsViolation { .. } => "rips_violation",
            Error::RadiusScheduleExceeded { .. } => "radius_schedule_exceeded",
            Error::VertexNotInHull { .. } => "vertex_not_in_hull",
            Error::TreeApproximationDiagnostic { .. } => "tree_approximation_diagnostic",
            Error::HomotopyIdentityFailed { .. } => "homotopy_identity_failed",
            Error::BasisNotClosed { .. } => "basis_not_closed",
            Error::MetricInvalid { .. } => "metric_invalid",
            Error::InvalidInput { .. } => "invalid_input",
            Error::Internal { .. } => "internal",
            Error::Json { .. } => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
