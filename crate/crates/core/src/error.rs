use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MelcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate support: all centers coincide and both bandwidths are zero")]
    DegenerateSupport,

    #[error("degenerate bandwidth: {0}")]
    DegenerateBandwidth(String),

    #[error("empty class: {0}")]
    EmptyClass(&'static str),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("zero Bayes risk: relative error undefined")]
    ZeroBayesRisk,

    #[error("unknown dataset name {name:?} (valid names: {valid})")]
    UnknownDataset { name: String, valid: String },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("power iteration did not converge within {max_iter} iterations")]
    NonConvergence { max_iter: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, MelcError>;
