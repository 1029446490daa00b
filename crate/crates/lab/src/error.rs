use std::path::PathBuf;

use expint_core::Error as CoreError;

/// Process exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit status for failed numerical gates.
pub const EXIT_GATE: i32 = 3;
/// Process exit status for IO and serialization failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] CoreError),

    #[error("reference solution failed self-validation: doubling the step count changed it by {diff:e} (limit {tol:e})")]
    UnreliableReference { diff: f64, tol: f64 },

    #[error("degenerate ladder: {0}")]
    DegenerateLadder(String),

    #[error("numerical gate failed: {0}")]
    Gate(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type LabResult<T> = Result<T, LabError>;

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => EXIT_CONFIG,
            LabError::Numerical(e) if is_argument_error(e) => EXIT_CONFIG,
            LabError::Numerical(_)
            | LabError::UnreliableReference { .. }
            | LabError::DegenerateLadder(_)
            | LabError::Gate(_) => EXIT_GATE,
            LabError::Io { .. } | LabError::Json(_) | LabError::Csv(_) => EXIT_IO,
        }
    }

    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::Numerical(e) if is_argument_error(e) => "config",
            LabError::Numerical(_) => "numerical",
            LabError::UnreliableReference { .. } => "unreliable-reference",
            LabError::DegenerateLadder(_) => "degenerate-ladder",
            LabError::Gate(_) => "gate",
            LabError::Io { .. } => "io",
            LabError::Json(_) => "json",
            LabError::Csv(_) => "csv",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}

fn is_argument_error(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::InvalidArgument(_)
            | CoreError::InvalidGrid(_)
            | CoreError::UnsupportedOrder(_)
            | CoreError::DimensionOverflow { .. }
            | CoreError::NotComplexLinear
            | CoreError::MissingLipschitz
    )
}
