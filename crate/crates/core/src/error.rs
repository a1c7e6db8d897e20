use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in record {context}: {message}")]
    Parse { context: String, message: String },

    #[error("unsupported residue '{residue}' at position {position}")]
    UnsupportedResidue { residue: char, position: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),

    #[error("degenerate partition: within-cluster dispersion is zero")]
    DegeneratePartition,

    #[error("degenerate training data: {0}")]
    DegenerateTrainingData(String),

    #[error("degenerate target: {0}")]
    DegenerateTarget(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("missing column '{0}'")]
    MissingColumn(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("calibration is regression-only")]
    CalibrationRegressionOnly,

    #[error("bundle schema version mismatch: file has {found}, this build expects {expected}")]
    SchemaVersionMismatch { found: u32, expected: u32 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
