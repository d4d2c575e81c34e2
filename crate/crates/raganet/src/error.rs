//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Pitch value outside the three-octave range `[-12, 23]`.
    #[error("pitch value {0} out of range [-12, 23]")]
    PitchOutOfRange(i64),

    /// Unrecognized token while parsing a note sequence. Position is the
    /// 1-based token index.
    #[error("unrecognized token {token:?} at position {position}")]
    Parse { token: String, position: usize },

    /// Not enough observations for the requested operation.
    #[error("{context}: need at least {needed} values, got {got}")]
    InsufficientData {
        context: &'static str,
        needed: usize,
        got: usize,
    },

    /// All scaler inputs equal; a min-max transform is undefined.
    #[error("cannot fit min-max scaler: all {0} input values are equal")]
    DegenerateScale(usize),

    /// Hold-out split would leave no training rows.
    #[error("holdout fraction {fraction} leaves no training rows (dataset has {rows})")]
    Split { rows: usize, fraction: f64 },

    /// Vector/matrix dimensions disagree with the network configuration.
    #[error("shape mismatch in {context}: expected {expected}, got {got}")]
    Shape {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An operation that averages over rows received none.
    #[error("{0}: empty input")]
    EmptyData(&'static str),

    /// Training produced a non-finite loss on every restart.
    #[error("training diverged (non-finite loss) at epoch {epoch} with eta {eta}")]
    Divergence { epoch: usize, eta: f64 },

    /// Simulation start symbol not present in the transition-matrix alphabet.
    #[error("pitch value {0} is not a state of the transition matrix")]
    UnknownState(i32),

    /// Every cell of an architecture sweep diverged.
    #[error("sweep failed: all {0} cells diverged")]
    SweepAllDiverged(usize),

    /// Malformed model file or unsupported format version.
    #[error("invalid model file: {0}")]
    Model(String),

    /// Invalid argument or configuration value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
