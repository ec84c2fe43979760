use thiserror::Error;

use crate::simplex::Simplex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex {0:?}: labels must be positive and strictly increasing")]
    MalformedSimplex(Vec<u32>),

    #[error("the empty simplex is not accepted here")]
    EmptySimplex,

    #[error("simplex {0} is not in the complex")]
    NotFound(Simplex),

    #[error("cannot insert {simplex}: its facet {missing} is absent")]
    ClosureViolation { simplex: Simplex, missing: Simplex },

    #[error("({tau}, {sigma}) is not a free pair")]
    NotFreePair { tau: Simplex, sigma: Simplex },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node limit of {0} simplices exceeded")]
    NodeLimit(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
