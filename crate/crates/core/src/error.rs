use thiserror::Error;

pub type Result<T, E = HqmError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HqmError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// No exact solution; `index` is the first equation (q-order, partition row, ...) that
    /// could not be matched.
    #[error("fit failure: no exact solution, first unmatched equation at index {index}")]
    FitFailure { index: usize },

    #[error("underdetermined: {known} equations available, {required} required")]
    Underdetermined { known: usize, required: usize },

    #[error("degree bound {bound} too small for phi_{m}")]
    DegreeBoundTooSmall { m: usize, bound: usize },

    #[error("brute-force oracle refused: d = {d} exceeds 6 (about {estimate} tuple checks)")]
    OracleTooLarge { d: usize, estimate: u128 },

    #[error("insufficient t-truncation: need degree {required} in t_{variable}, have {available}")]
    InsufficientTruncation {
        variable: usize,
        required: u32,
        available: u32,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl HqmError {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            HqmError::FitFailure { .. } => 3,
            _ => 2,
        }
    }
}
