use thiserror::Error;

/// Errors raised by the workbench primitives.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chain size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("chain size {0} is not supported (expected 1..={max})", max = crate::map::MAX_N)]
    InvalidChainSize(usize),

    #[error("value {value} at point {point} is outside 1..={n}")]
    ValueOutOfRange {
        point: usize,
        value: usize,
        n: usize,
    },

    #[error("malformed map literal `{literal}`: {reason}")]
    Parse { literal: String, reason: String },

    #[error("{0}")]
    Domain(String),

    #[error("resource limit exceeded: {what} ({actual} > {limit})")]
    ResourceLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("convex vital element of height {p} at {i} is extreme and admits no deflation")]
    ExtremeElement { p: usize, i: usize },

    #[error("element is not in the generated closure")]
    NotGenerated,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
