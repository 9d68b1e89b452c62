use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A desk-scale cap was exceeded. Caps exist because the exact routines
    /// enumerate; raising them is possible (`--unsafe-caps` in the CLI) but the
    /// library refuses by default rather than silently running for hours.
    #[error("{what} = {got} exceeds cap {cap} (raise caps explicitly if you mean it)")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("conditioning on an event of probability zero: {0}")]
    ZeroProbability(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An identity that must hold by construction failed; this is a bug in the
    /// caller's inputs or in this crate, never a numerical margin.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
