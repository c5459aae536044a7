use thiserror::Error;

/// Errors raised while loading, validating or mining conceptual graphs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cycle in {kind} hierarchy through `{name}`")]
    Cycle { kind: &'static str, name: String },

    #[error("concept hierarchy has no top type")]
    MissingTop,

    #[error("concept hierarchy has several top types: {0:?}")]
    MultipleTops(Vec<String>),

    #[error("duplicate type or marker `{0}`")]
    Duplicate(String),

    #[error("unknown {kind} `{name}`")]
    UnknownType { kind: &'static str, name: String },

    #[error("relation `{relation}` has arity {arity} but its signature lists {found} types")]
    SignatureArity {
        relation: String,
        arity: usize,
        found: usize,
    },

    #[error("relation `{relation}` has arity {arity} but its parent `{parent}` has arity {parent_arity}")]
    ParentArity {
        relation: String,
        arity: usize,
        parent: String,
        parent_arity: usize,
    },

    #[error("relation `{relation}`: signature type `{child}` at position {position} is not below parent signature type `{parent}`")]
    SignatureNotBelowParent {
        relation: String,
        position: usize,
        child: String,
        parent: String,
    },

    #[error("relation `{0}` must have an arity of at least 1")]
    ZeroArity(String),

    #[error("invalid rule `{rule}`: {message}")]
    Rule { rule: String, message: String },

    #[error("formalism violation: {0}")]
    Formalism(String),

    #[error("pattern is not connected")]
    Disconnected,

    #[error("internal invariant failure: {0}")]
    Internal(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid database: {0}")]
    InvalidDatabase(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Syntax {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
