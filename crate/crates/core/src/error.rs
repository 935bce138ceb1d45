use thiserror::Error;

use crate::terms::Calculus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("ill-formed term: {0}")]
    IllFormed(String),

    #[error("cannot mix a {0} term with a {1} term")]
    CrossCalculus(Calculus, Calculus),

    #[error("{0} is not supported for {1}")]
    Unsupported(&'static str, Calculus),

    #[error("substitution leaves {0:?} uninstantiated")]
    IncompleteSubstitution(Vec<String>),

    #[error("state space exceeded the budget of {0} pairs")]
    DivergenceBudgetExceeded(usize),

    #[error("barbs quantified over all contexts are not supported; use contextual barbs")]
    UnsupportedQuantification,

    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
