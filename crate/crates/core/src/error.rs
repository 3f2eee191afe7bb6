use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-simple torus: side length {side} < 3 creates loops or multi-edges")]
    NonSimpleTorus { side: usize },
    #[error("invalid torus dimension {0}: must be at least 1")]
    InvalidDimension(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("enumeration budget of {limit} visited nodes exceeded")]
    BudgetExceeded { limit: u64 },
    #[error("requested order {requested} exceeds the maximum {max}")]
    OrderTooLarge { requested: usize, max: usize },
    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),
    #[error("no rotation system supplied; this operation needs an embedding")]
    MissingRotation,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("embedding is not circular: face {face} is not bounded by a cycle")]
    NonCircular { face: usize },
    #[error("dual graph is not simple: {0}")]
    NonSimpleDual(String),
    #[error("{which} has a zero column at index {index}")]
    ZeroColumn { which: &'static str, index: usize },
    #[error("coin size mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    CoinSizeMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix dimension {dim} exceeds {max}; use point evaluation instead")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("singular point: det F vanishes at k = {k:?}")]
    SingularPoint { k: Vec<f64> },
    #[error("branch crossing: log argument is not positive at angles {angles:?}")]
    BranchCrossing { angles: Vec<f64> },
    #[error("integrand is not finite at node {node:?}")]
    NonFinite { node: Vec<f64> },
    #[error("quadrature did not converge: gap {gap:e} at grid {grid}")]
    NoConvergence { gap: f64, grid: usize },
    #[error("singular matrix in determinant evaluation")]
    Singular,
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("inconsistent embedding: predicted multiplicity {0} is negative")]
    NegativeMultiplicity(i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("claim {claim} is not applicable: {reason}")]
    NotApplicable { claim: String, reason: String },
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularPoint { .. }
                | Error::BranchCrossing { .. }
                | Error::NonFinite { .. }
                | Error::NoConvergence { .. }
                | Error::Singular
                | Error::Eigen(_)
                | Error::BudgetExceeded { .. }
        )
    }
}
