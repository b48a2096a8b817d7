use thiserror::Error;

/// Errors produced by circuit construction, simulation and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown gate kind `{0}`")]
    UnknownGate(String),
    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("gate references undeclared parameter `{0}`")]
    UndeclaredParameter(String),
    #[error("parameter `{0}` declared more than once")]
    DuplicateParameter(String),
    #[error("parameter `{0}` is declared but never used")]
    UnusedParameter(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("expected {expected} parameter values, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitMismatch { expected: usize, got: usize },
    #[error("circuit has no cost observable")]
    MissingCost,
    #[error("loss became non-finite at step {step}")]
    Divergence { step: usize },
    #[error("histograms are defined on different bin grids")]
    GridMismatch,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
