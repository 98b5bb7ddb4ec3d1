//! Error type shared by the whole crate, with the CLI exit-code mapping.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad CSV cell, duplicate id,
    /// length mismatch, missing required parameter, ...).
    #[error("{0}")]
    Input(String),

    /// Strategy cannot run on this problem shape (e.g. the angle-based
    /// knee needs exactly two objectives).
    #[error("unsupported strategy: {0}")]
    UnsupportedStrategy(String),

    /// The analysis is structurally valid but has no feasible answer:
    /// head and tail popularity anchors coincide.
    #[error("degenerate calibration: {0}")]
    DegenerateCalibration(String),

    /// The analysis is structurally valid but has no feasible answer:
    /// the frontier came out empty.
    #[error("empty frontier: {0}")]
    EmptyFrontier(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// Process exit code the CLI maps this error to: 2 for input/usage
    /// problems, 3 for domain-infeasible analyses.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateCalibration(_) | Error::EmptyFrontier(_) => 3,
            _ => 2,
        }
    }
}

/// Shorthand for `Error::Input` with format args.
macro_rules! input_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Input(format!($($arg)*))
    };
}
pub(crate) use input_err;
