use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar context mismatch: {0}")]
    ContextMismatch(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid radicand {0}: must be a squarefree integer other than 0 and 1")]
    InvalidRadicand(i64),

    #[error("radical term requires a radicand context")]
    RadicandRequired,

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("matrix must be square with at least two rows, got {0}")]
    MatrixTooSmall(usize),

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weight mismatch: expected |p| = {expected}, found {found}")]
    SumMismatch { expected: usize, found: usize },

    #[error("margin mismatch: row sums total {row_total} but column sums total {col_total}")]
    MarginMismatch { row_total: usize, col_total: usize },

    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),

    #[error("table of {required_cells} cells exceeds the cell budget of {budget}")]
    BudgetExceeded { required_cells: String, budget: u64 },

    #[error("univariate fit requires q = 2, got q = {0}")]
    FitRequiresBinary(usize),

    #[error("grid function does not cover V({n},{q}) exactly: {detail}")]
    IncompleteGrid { n: usize, q: usize, detail: String },

    #[error("expansion round trip failed at grid point {at}")]
    RoundTripFailed { at: String },
}

pub type Result<T> = std::result::Result<T, Error>;
