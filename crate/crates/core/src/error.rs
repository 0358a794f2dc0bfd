use std::fmt;

use thiserror::Error;

/// The metric axiom a distance matrix failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `d(u,u) = 0`
    ZeroDiagonal,
    /// `d(u,v) = d(v,u)`
    Symmetry,
    /// `d(u,v) > 0` for `u != v`
    Positivity,
    /// `d(u,w) <= d(u,v) + d(v,w)`
    Triangle,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::ZeroDiagonal => "zero diagonal",
            Axiom::Symmetry => "symmetry",
            Axiom::Positivity => "positivity",
            Axiom::Triangle => "triangle inequality",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded below")]
    Unbounded,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("size mismatch: space has {expected} points, input refers to {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a metric: {axiom} fails at {indices:?}")]
    NotAMetric { axiom: Axiom, indices: Vec<usize> },
    #[error("at least two points are required, found {0}")]
    TooFewPoints(usize),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("support point {index} out of range for {n} points")]
    SupportOutOfRange { index: usize, n: usize },
    #[error("values do not sum to zero (sum is {0})")]
    NotZeroSum(String),
    #[error("input too large: {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("odd number of vertices ({0})")]
    OddVertexCount(usize),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(usize),
    #[error("pair {0} has equal endpoints")]
    DegeneratePair(usize),
    #[error("expected {expected} coefficients, found {found}")]
    CoeffLengthMismatch { expected: usize, found: usize },
    #[error("coefficient {0} is not strictly positive")]
    NonPositiveCoeff(usize),
    #[error("invalid flow network: {0}")]
    InvalidNetwork(String),
    #[error("invalid edge ({0}, {1}): edges must satisfy i < j")]
    InvalidEdge(usize, usize),
    #[error("family index {0} is invalid: family indices start at 1")]
    FamilyIndex(usize),
    #[error("Lipschitz function is not zero at base point {0}")]
    NonZeroAtBase(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
