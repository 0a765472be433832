use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty chain")]
    EmptyChain,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("cycles not disjoint: element {0} appears more than once")]
    CyclesNotDisjoint(u32),

    #[error("element out of range: {element} is not in [1, {n}]")]
    ElementOutOfRange { element: u32, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource guard: {what} = {value} exceeds the limit {limit}")]
    ResourceGuard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("{0} is not a member of the chain")]
    NotInChain(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("decode error at {pointer}: {msg}")]
    Decode { pointer: String, msg: String },
}

impl Error {
    pub(crate) fn guard(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::ResourceGuard {
            what,
            value: value.into(),
            limit: limit.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

/// Rejects `value > limit` with a resource-guard error.
pub(crate) fn ensure_within(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::guard(what, value as u128, limit as u128))
    } else {
        Ok(())
    }
}
