use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad input: out-of-range parameters, malformed files, inconsistent configs.
    #[error("validation error: {0}")]
    Validation(String),

    /// An enumeration would exceed its configured cap. `lower_bound` carries
    /// whatever partial answer the search had established when it stopped.
    #[error("resource guard: {what} needs {needed} steps, cap is {cap}{}", lower_bound.map(|b| format!(" (result is at least {b})")).unwrap_or_default())]
    ResourceGuard {
        what: String,
        needed: u128,
        cap: u64,
        lower_bound: Option<usize>,
    },

    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    /// The complex was not built high enough to answer the question.
    #[error("complex is complete only through dimension {built}, need {needed}")]
    InsufficientDimension { built: usize, needed: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn guard(what: impl Into<String>, needed: u128, cap: u64) -> Self {
        Error::ResourceGuard {
            what: what.into(),
            needed,
            cap,
            lower_bound: None,
        }
    }

    pub fn with_lower_bound(self, bound: usize) -> Self {
        match self {
            Error::ResourceGuard {
                what, needed, cap, ..
            } => Error::ResourceGuard {
                what,
                needed,
                cap,
                lower_bound: Some(bound),
            },
            other => other,
        }
    }

    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::ResourceGuard { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
