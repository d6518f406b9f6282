use std::fmt;

/// A broken structural assumption of a factored MDP, named after the assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub assumption: &'static str,
    pub detail: String,
}

impl Violation {
    pub fn new(assumption: &'static str, detail: impl Into<String>) -> Self {
        Violation { assumption, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.assumption, self.detail)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("model validation failed: {}", join(.0))]
    Validation(Vec<Violation>),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("linear program: {0}")]
    Lp(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl fmt::Display) -> Self {
        Error::Parse { location: location.into(), message: message.to_string() }
    }
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
