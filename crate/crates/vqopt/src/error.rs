//! Crate-wide error type shared by all modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} out of supported range 1..=24")]
    QubitCountOutOfRange(usize),

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    #[error("state dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("gate {0} requires an angle but none could be resolved")]
    MissingAngle(&'static str),

    #[error("gate {0} does not take an angle")]
    UnexpectedAngle(&'static str),

    #[error("gate {gate} expects {expected} distinct target(s), got {got}")]
    BadTargets {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("parameter slot {slot} out of range for {n_params} parameters")]
    ParamSlotOutOfRange { slot: usize, n_params: usize },

    #[error("parameter vector has length {got}, circuit expects {expected}")]
    ParamLengthMismatch { expected: usize, got: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid Pauli operator: {0}")]
    InvalidPauli(String),

    #[error("{path}:{line}: {msg}")]
    ParseLine {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("blend coefficients must lie in [0, 1], got {0}")]
    BlendOutOfRange(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("checkpoint version {found} unsupported (expected {expected})")]
    CheckpointVersion { expected: u32, found: u32 },

    #[error("checkpoint not found at {0}")]
    CheckpointMissing(String),

    #[error("corrupt checkpoint {path}: {msg}")]
    CheckpointCorrupt { path: String, msg: String },

    #[error("meta-training failed: {0}")]
    MetaTraining(String),

    #[error("benchmark suite error: {0}")]
    Suite(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error on {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Attach a path to a raw io error.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attach a path to a serde_json error.
    pub fn json(path: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
