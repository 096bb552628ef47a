use thiserror::Error;

/// Errors produced by this crate.
///
/// The variants map onto the CLI exit-code contract: `Parse` and `Domain`
/// are input errors, `Resource` means a guard was exceeded, and `Numeric`
/// marks numeric domain failures such as singular matrices.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates an operation precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A resource guard refused the computation.
    #[error("resource guard `{guard}` exceeded: {detail}")]
    Resource { guard: String, detail: String },

    /// Malformed text input (exponent files, alist, CSV, theta files).
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Numeric domain failure (e.g. singular matrix).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(guard: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Resource {
            guard: guard.into(),
            detail: detail.into(),
        }
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
