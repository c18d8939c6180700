use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "invalid triangular fuzzy number ({a}, {b}, {c}): vertices must be finite with a <= b <= c"
    )]
    InvalidFuzzyNumber { a: f64, b: f64, c: f64 },

    #[error("{0}")]
    InvalidShoulder(String),

    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(f64),

    #[error("cannot normalize: {0}")]
    Normalize(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("infeasible weight bounds at alpha {alpha}: {detail}")]
    InfeasibleWeights { alpha: f64, detail: String },

    #[error("rule base line {line}: {message}")]
    RuleParse { line: usize, message: String },

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Invalid(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { .. } | Error::Csv { .. } => 2,
            _ => 1,
        }
    }
}
