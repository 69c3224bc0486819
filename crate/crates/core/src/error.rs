use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfpError {
    #[error("matrix must have at least one machine and one part")]
    EmptyMatrix,
    #[error("matrix has {rows} rows but row {row} has {len} entries (expected {parts})")]
    RaggedMatrix {
        rows: usize,
        row: usize,
        len: usize,
        parts: usize,
    },
    #[error("matrix of {machines}x{parts} exceeds the supported {limit} elements")]
    TooLarge {
        machines: usize,
        parts: usize,
        limit: usize,
    },
    #[error("dimension mismatch: expected {expected} {what}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("{0} is undefined: zero denominator")]
    ZeroDenominator(&'static str),
    #[error("no partition of {total} into {parts} parts of size at least {min_part}")]
    InfeasiblePartition {
        total: usize,
        parts: usize,
        min_part: usize,
    },
    #[error("invalid cell configuration: {0}")]
    InvalidConfiguration(String),
    #[error("infeasible move: {0}")]
    InfeasibleMove(String),
    #[error("configuration list is empty")]
    NoConfigurations,
    #[error("invalid cell range [{min}, {max}] for a matrix with at most {limit} cells")]
    InvalidCellRange { min: usize, max: usize, limit: usize },
    #[error("no feasible cell count: {0}")]
    NoFeasibleCells(String),
    #[error("enumeration needs {required} solutions, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
}

pub type Result<T, E = CfpError> = std::result::Result<T, E>;
