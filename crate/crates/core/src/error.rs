use thiserror::Error;

/// Problems found while reading or validating a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("relation `{relation}` is not a composable path")]
    NotComposable { relation: String },
    #[error("relation `{relation}` has weight {weight}, relations need weight at least 2")]
    ShortRelation { relation: String, weight: usize },
    #[error("relation `{divisor}` divides relation `{multiple}`")]
    DivisorViolation { divisor: String, multiple: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("resource limit exceeded: {what} has size {size}, cap is {cap}")]
    ResourceLimit {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("bar term {0} is not a vertex of the Morse graph")]
    NotInGraph(String),
    #[error("the algebra is infinite dimensional, so the bar-cochain complex has infinite blocks")]
    InfiniteDimensional,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
