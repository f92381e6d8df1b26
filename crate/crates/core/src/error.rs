use thiserror::Error;

/// Every failure the library can report.
///
/// The CLI prints [`Error::name`] on standard error, so variant names are part
/// of the external contract.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("operator is not Hermitian (max asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("eigen-decomposition did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NotConverged { sweeps: usize, residual: f64 },

    #[error("post-selection has vanishing probability ({probability:.3e})")]
    VanishingPostSelection { probability: f64 },

    #[error("pre- and post-selected states are orthogonal (|<post|pre>| = {overlap:.3e}); weak value undefined")]
    OrthogonalSelections { overlap: f64 },

    #[error("none of {shots} shots survived post-selection")]
    NoPostSelectedShots { shots: u64 },

    #[error("grid [{x_min}, {x_max}] does not cover [{needed_min}, {needed_max}]")]
    GridTooNarrow {
        x_min: f64,
        x_max: f64,
        needed_min: f64,
        needed_max: f64,
    },

    #[error("no complete measurement brackets time {time}")]
    NoBracketingCompleteMeasurements { time: i64 },

    #[error("record at time {record_time} lies between the bracketing measurements at {t1} and {t2}")]
    InterveningRecord { t1: i64, t2: i64, record_time: i64 },

    #[error("query time {time} coincides with an existing record")]
    TimeCollision { time: i64 },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: outcome {outcome} is not an eigenvalue of observable `{observable}`")]
    OutcomeNotEigenvalue {
        line: usize,
        observable: String,
        outcome: f64,
    },

    #[error("line {line}: duplicate timestamp {time}")]
    DuplicateTimestamp { line: usize, time: i64 },

    #[error("unknown observable `{0}`")]
    UnknownObservable(String),

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("protocol validation failed: {0}")]
    ValidationFailed(String),
}

impl Error {
    /// Stable identifier for the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Malformed(_) => "Malformed",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotConverged { .. } => "NotConverged",
            Error::VanishingPostSelection { .. } => "VanishingPostSelection",
            Error::OrthogonalSelections { .. } => "OrthogonalSelections",
            Error::NoPostSelectedShots { .. } => "NoPostSelectedShots",
            Error::GridTooNarrow { .. } => "GridTooNarrow",
            Error::NoBracketingCompleteMeasurements { .. } => "NoBracketingCompleteMeasurements",
            Error::InterveningRecord { .. } => "InterveningRecord",
            Error::TimeCollision { .. } => "TimeCollision",
            Error::Syntax { .. } => "SyntaxError",
            Error::OutcomeNotEigenvalue { .. } => "OutcomeNotEigenvalue",
            Error::DuplicateTimestamp { .. } => "DuplicateTimestamp",
            Error::UnknownObservable(_) => "UnknownObservable",
            Error::InvalidProtocol(_) => "InvalidProtocol",
            Error::ValidationFailed(_) => "ValidationFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
