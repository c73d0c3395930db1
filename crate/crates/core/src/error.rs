use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: shape mismatch between {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("malformed linear representation: {0}")]
    MalformedRep(String),

    #[error("radix mismatch: {0} vs {1}")]
    RadixMismatch(u64, u64),

    #[error(
        "leading-zero invariant fails (initial * A_0 != initial); padding a digit string \
         with zeros changes the value, so block and digit-recursive sums are not defined"
    )]
    LeadingZeroViolation,

    #[error(
        "root finder did not converge after {iterations} iterations (residuals {residuals:?})"
    )]
    RootFinding {
        iterations: usize,
        residuals: Vec<f64>,
    },

    #[error("{what}: {count} products exceed the budget of {budget}")]
    ProductBudget {
        what: &'static str,
        count: u128,
        budget: u128,
    },

    #[error("{what}: n = {n} is outside the allowed range {min}..={max}{hint}")]
    LevelOutOfRange {
        what: &'static str,
        n: u32,
        min: u32,
        max: u32,
        hint: &'static str,
    },

    #[error("sign matrix undefined: column {0} of B is zero")]
    ZeroColumn(usize),

    #[error("sign matrix undefined: row {0} of B is zero")]
    ZeroRow(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("cache snapshot rejected: {0}")]
    CorruptCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
