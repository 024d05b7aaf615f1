use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("logarithm branch undefined: {0}")]
    BranchUndefined(String),
    #[error("value is not rational, exact path unavailable: {0}")]
    Irrational(String),
    #[error("negative index {0}")]
    NegativeIndex(i64),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("inner summation range is unbounded; supply a cutoff")]
    UnboundedInner,
    #[error("window cannot be certified exact: {0}")]
    Uncertifiable(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
