use thiserror::Error;

/// Errors raised by the simulator, trainer, closure engine and experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch for {what}: expected {expected}, got {found}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("site {site} out of range for {n_qubits} qubit(s)")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("element is not skew-Hermitian and traceless (deviation {deviation:.3e})")]
    NotSkewHermitian { deviation: f64 },

    #[error("target {value} outside observable range [{min}, {max}]")]
    TargetOutOfRange { value: f64, min: f64, max: f64 },

    #[error(
        "training target {value} lies outside [{min}, {max}]; normalize the dataset with normalize_targets first"
    )]
    UnnormalizedTargets { value: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("cannot parse operator `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
