use std::fmt;

use thiserror::Error;

/// A single violated parameter constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldViolation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<FieldViolation>),

    #[error("degenerate channel draw: {0}")]
    DegenerateDraw(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient samples: {trials} trials at epsilon {epsilon} (need trials >= 100 and epsilon * trials >= 1)")]
    InsufficientSamples { trials: usize, epsilon: f64 },

    #[error("no optimum: secrecy outage capacity is zero over the whole bracket")]
    NoOptimum,

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("row {index} ({variable} = {value}): {source}")]
    Row {
        index: usize,
        variable: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParams(_) => 2,
            Error::Io(_) => 4,
            Error::Row { source, .. } => source.exit_code(),
            _ => 3,
        }
    }

    /// Names of the fields involved, when the error is about parameters or config.
    pub fn fields(&self) -> Vec<&str> {
        match self {
            Error::InvalidParams(v) => v.iter().map(|f| f.field).collect(),
            Error::Config { path, .. } => vec![path.as_str()],
            Error::Row { source, .. } => source.fields(),
            _ => Vec::new(),
        }
    }
}

fn join(v: &[FieldViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
