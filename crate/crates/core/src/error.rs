//! Error type shared across the toolkit.

use thiserror::Error;

/// Unified error type for all toolkit operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector had the wrong length for the problem at hand.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A documented precondition was not met by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A computation produced or received a NaN/infinite value where a
    /// finite one is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// The objective returned NaN/infinity for an evaluated point.
    #[error("invalid evaluation: objective returned {value} at {context}")]
    InvalidEvaluation { value: f64, context: String },

    /// The run's evaluation budget is spent; no further objective calls
    /// are permitted.
    #[error("evaluation budget exhausted")]
    BudgetExhausted,

    /// An algorithm name that no descriptor claims.
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),

    /// A problem name that the benchmark registry does not know.
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),

    /// A parameter value outside the schema bounds of its algorithm.
    #[error("parameter '{name}' = {value} outside legal range {range}")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        range: String,
    },

    /// A parameter name not declared by the owning algorithm descriptor.
    #[error("unknown parameter '{name}' for algorithm '{algorithm}'")]
    UnknownParameter { name: String, algorithm: String },

    /// Invalid experiment or tuning configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A Markov chain without a unique stationary distribution.
    #[error("chain does not converge: second eigenvalue modulus is 1")]
    NonConvergentChain,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code for the CLI: 2 for validation errors, 1 for
    /// runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::BudgetExhausted => 1,
            _ => 2,
        }
    }
}

pub(crate) fn contract_error(msg: impl Into<String>) -> Error {
    Error::contract(msg)
}

/// Toolkit-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
