use thiserror::Error;

/// Errors produced by graph construction, distance computation and curve tracing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("invalid entry at ({row}, {col}): {value}")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("node {0} has zero degree")]
    IsolatedNode(usize),

    #[error("graph is disconnected: node {unreachable} cannot be reached from node {source_node}")]
    Disconnected { source_node: usize, unreachable: usize },

    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("signal is not unit norm (norm = {0})")]
    NotUnitNorm(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate spread: {0}")]
    Degenerate(String),

    #[error("curve refinement exceeded depth {depth} between s = {s_lo} and s = {s_hi}")]
    RefinementDepth { depth: usize, s_lo: f64, s_hi: f64 },

    #[error(
        "no connected geometric graph after {attempts} attempts (empirical connectivity rate {rate})"
    )]
    ConnectivityNotAchieved { attempts: usize, rate: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
