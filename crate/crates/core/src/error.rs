use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("enumeration cap exceeded: {what} has size {size}, cap is {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("lambda {lambda} outside feasible range [{low}, {high}]")]
    OutOfRange { lambda: String, low: i64, high: i64 },

    #[error("column {column} ({label}) is a monopoly at level {k}")]
    Monopoly { column: usize, label: String, k: i64 },

    #[error("premise fails at column {column} ({label}): {reason}")]
    PremiseFailed { column: usize, label: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid generator spec: {0}")]
    Spec(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
