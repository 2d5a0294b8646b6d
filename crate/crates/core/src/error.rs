use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({0}, {1}): self-loops are not allowed")]
    InvalidEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid vertex pair ({0}, {1}): endpoints must differ")]
    InvalidPair(usize, usize),
    #[error("invalid quadruple {0:?}: vertices must be distinct")]
    InvalidQuad([usize; 4]),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid cycle witness {vertices:?}: {reason}")]
    InvalidWitness { vertices: Vec<usize>, reason: String },
    #[error("parameter outside the formula's domain: {0}")]
    OutOfDomain(String),
    #[error("square graph has more than {cap} squares")]
    CapacityExceeded { cap: usize },
    #[error("search budget of {budget} node expansions exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("n = {0} is too large for exhaustive enumeration (max 7)")]
    TooLarge(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config error in field `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error("cell {cell}: {errors} of {trials} trials failed (more than 1%)")]
    ErroredTrials { cell: String, errors: u64, trials: u64 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn config(field: &str, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            msg: msg.into(),
        }
    }

    /// Short machine-readable tag, used in trial records.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidEdge(..) => "invalid-edge",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::InvalidPair(..) => "invalid-pair",
            Error::InvalidQuad(..) => "invalid-quad",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidWitness { .. } => "invalid-witness",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::CapacityExceeded { .. } => "capacity-exceeded",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::TooLarge(_) => "too-large",
            Error::Parse { .. } => "parse",
            Error::Config { .. } => "config",
            Error::ErroredTrials { .. } => "errored-trials",
            Error::Io(_) => "io",
        }
    }
}
