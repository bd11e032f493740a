use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Each variant belongs to one [`ErrorKind`], which the command-line front
/// end maps onto its exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tree shape: {0}")]
    InvalidShape(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("depth exceeded: requested {requested}, available {available}")]
    DepthExceeded { requested: usize, available: usize },
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("element is not contained in the group")]
    ElementOutsideGroup,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("group definition error: {0}")]
    Definition(String),
    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("kernel branch reached at block {block} but no conjugators were supplied")]
    MissingConjugator { block: usize },
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("search exhausted at bound {bound}: {what}")]
    NotFound { what: String, bound: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("matrix is not invertible over its ring: {0}")]
    NotUnit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse classification of [`Error`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Precondition,
    SearchExhausted,
    Budget,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotFound { .. } => ErrorKind::SearchExhausted,
            Error::Budget(_) => ErrorKind::Budget,
            Error::Io(_) | Error::Parse(_) => ErrorKind::Io,
            _ => ErrorKind::Precondition,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
