use thiserror::Error;

/// Errors raised by the group, function-space and kernel layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator m_{position} = {value} is smaller than 2")]
    InvalidGenerator { position: usize, value: usize },

    #[error("group order overflows at depth {depth}")]
    OrderOverflow { depth: usize },

    #[error("{what} = {value} is out of range (must be {bound})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        bound: String,
    },

    #[error("digit {digit} at position {position} is not in Z_{radix}")]
    InvalidDigit {
        position: usize,
        digit: usize,
        radix: usize,
    },

    #[error("operands live on different generator sequences")]
    IncompatibleGenerators,

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("exponent p = {0} must be positive")]
    InvalidExponent(f64),

    #[error("depth {have} is too small, need at least {need}")]
    InsufficientDepth { need: usize, have: usize },

    #[error("invalid weight function: {0}")]
    InvalidPhi(String),

    #[error("invalid rank sequence: {0}")]
    InvalidRanks(String),

    #[error("martingale is inconsistent: {0}")]
    NotAMartingale(String),

    #[error("not a p-atom: {0}")]
    NotAnAtom(String),

    #[error("only {} of {requested} ranks fit the rank budget", achieved.len())]
    AlphaBudget {
        achieved: Vec<usize>,
        requested: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
