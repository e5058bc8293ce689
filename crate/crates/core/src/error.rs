use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("shape mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    Shape {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("potentials of length {got} cannot act on a matrix of order {expected}")]
    PotentialsLength { expected: usize, got: usize },

    #[error("tropical power with exponent 0 is undefined over finite entries")]
    ZeroPower,

    #[error("order {n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("matrix must have at least one row and one column")]
    Empty,

    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },

    #[error("invalid rational {text:?}: {reason}")]
    BadRational { text: String, reason: &'static str },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, TropError>;
