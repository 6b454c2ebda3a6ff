use thiserror::Error;

/// Error raised while reading formulas, patterns, sequents or map terms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown constructor `{token}` at {pos}")]
    UnknownConstructor { pos: usize, token: String },
    #[error("ambiguous constructor `{token}` at {pos}: candidates {candidates}")]
    Ambiguous {
        pos: usize,
        token: String,
        candidates: String,
    },
    #[error("arity mismatch at {pos}: `{token}` takes {expected} argument(s)")]
    Arity {
        pos: usize,
        token: String,
        expected: usize,
    },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownConstructor { pos, .. }
            | ParseError::Ambiguous { pos, .. }
            | ParseError::Arity { pos, .. } => *pos,
        }
    }

    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("`{formula}` is not a formula over signature {signature}: {reason}")]
    SignatureMismatch {
        formula: String,
        signature: String,
        reason: String,
    },
    #[error("ill-formed map term: {0}")]
    MapTerm(String),
    #[error("map term of arity {expected} applied to {found} argument(s)")]
    MapArity { expected: usize, found: usize },
    #[error("invalid translation: {0}")]
    Translation(String),
    #[error("identification conflict: {0}")]
    MergeConflict(String),
    #[error("invalid rule schema `{rule}`: {reason}")]
    Schema { rule: String, reason: String },
    #[error("invalid calculus: {0}")]
    Calculus(String),
    #[error("line {line}: {msg}")]
    File { line: usize, msg: String },
    #[error("no truth table for `{0}`")]
    MissingTable(String),
    #[error("valuation does not assign p{0}")]
    MissingValuation(u32),
    #[error("invalid matrix: {0}")]
    Matrix(String),
    #[error("unknown logic `{0}`")]
    UnknownLogic(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
