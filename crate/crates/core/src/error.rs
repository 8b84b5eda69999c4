use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator.
///
/// Each variant maps onto one of the stable CLI exit codes via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key `{key}` in {section}")]
    UnknownKey { section: String, key: String },

    #[error(
        "unknown use case `{0}` (valid ids: UL, FL, CTRL, FU-UD, UU-FD, ISL-SO, ISL-ML, SATL)"
    )]
    UnknownUseCase(String),

    #[error("invalid range `{0}`: expected start:stop:step with start <= stop and step > 0")]
    Range(String),

    #[error("no common visibility: {0}")]
    NoCommonVisibility(String),

    #[error("degenerate spectral efficiency: {0}")]
    DegenerateSpectralEfficiency(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code for this error class: 1 validation, 2 I/O, 3 no common visibility.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::NoCommonVisibility(_) => 3,
            _ => 1,
        }
    }
}

/// Fails with a validation error unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be positive, got {value}"),
        ))
    }
}

pub(crate) fn ensure_non_negative(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be >= 0, got {value}"),
        ))
    }
}

pub(crate) fn ensure_finite(field: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("must be finite, got {value}"),
        ))
    }
}
