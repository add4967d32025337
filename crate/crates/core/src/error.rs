use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter {0:?}")]
    UnknownLetter(char),

    #[error("letter index {index} outside alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },

    #[error("horizon exceeded: needed {needed} letters, cap is {cap}")]
    HorizonExceeded { needed: u64, cap: u64 },

    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("morphism is not primitive")]
    NotPrimitive,

    #[error("word is not a path of the Rauzy graph of order {k}: {reason}")]
    NotAFactorPath { k: usize, reason: String },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("graph is a single cycle")]
    GraphIsCycle,

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("a bispecial factor has length exactly {0}")]
    BispecialAtOrder(usize),

    #[error("edge {0} is not a support edge")]
    NotSupportEdge(u32),

    #[error("scheme has no support edge")]
    NoSupportEdge,

    #[error("degenerate evolution result: {0}")]
    DegenerateResult(String),

    #[error("symmetric path cap {cap} too small")]
    PathCapExceeded { cap: usize },

    #[error("parse of the infinite word disagrees with the scheme: {0}")]
    TraceMismatch(String),

    #[error("oracle routes disagree: {0}")]
    OracleDisagreement(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for verdicts that are honest "cannot tell within the budget" outcomes.
    pub fn is_horizon(&self) -> bool {
        matches!(self, Error::HorizonExceeded { .. } | Error::PathCapExceeded { .. })
    }
}
