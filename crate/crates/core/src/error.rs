use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed text or structured input.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("values are not pairwise distinct: {0} repeats")]
    Tie(String),

    #[error("invalid occurrence: {0}")]
    InvalidOccurrence(String),

    #[error("square ({col},{row}) lies outside [0,{k}]x[0,{k}]")]
    SquareOutOfRange { col: usize, row: usize, k: usize },

    #[error("mesh is over k={mesh_k} but the pattern has length {pattern_k}")]
    MeshSizeMismatch { mesh_k: usize, pattern_k: usize },

    /// A configured resource bound was exceeded.
    #[error("{what} = {value} exceeds the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The brute-force evidence disagrees with the enclosed-diagonal criterion.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(token: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.into(),
        reason: reason.into(),
    }
}
