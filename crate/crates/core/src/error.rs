use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {index} is invalid: {reason}")]
    InvalidEdge { index: usize, reason: String },

    #[error("index {value} out of range {lo}..={hi} for {what}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },

    #[error("set of size {size} exceeds edge size {k}")]
    SetTooLarge { size: usize, k: usize },

    #[error("{n} is not prime")]
    NotPrime { n: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular {size}x{size} minor on columns {columns:?} modulo {modulus}")]
    SingularMinor {
        columns: Vec<usize>,
        size: usize,
        modulus: u64,
    },

    #[error("redundant matrix: x_{i} = x_{j} is implied by the rows modulo {modulus}")]
    RedundantPair { i: usize, j: usize, modulus: u64 },

    #[error("budget exceeded: {needed} units needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("not a permutation of 0..{n}")]
    NotPermutation { n: usize },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("negative residual weight {residual} for type {partition}")]
    NegativeResidual { partition: String, residual: f64 },

    #[error("missing input: {0}")]
    MissingInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
