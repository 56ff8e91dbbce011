use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("resource cap: {what} has size {size}, cap is {cap}")]
    Resource {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("axiom {axiom} fails: {witness}")]
    Axiom { axiom: String, witness: String },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Axiom { .. } => 1,
            Error::Input(_) | Error::Parse { .. } => 2,
            Error::Resource { .. } => 3,
            Error::Invariant(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::Resource { what, size, cap })
    } else {
        Ok(())
    }
}
