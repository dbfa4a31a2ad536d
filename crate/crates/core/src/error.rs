use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index ({0}, {1}) out of range")]
    IndexOutOfRange(usize, usize),

    /// 1-based column whose pivot fell below the tolerance.
    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("pattern does not have (0..n) as a perfect elimination ordering")]
    NotChordal,

    #[error("no clique ordering with the running intersection property was found")]
    RipFailure,

    /// 0-based index of the clique whose block is not positive definite.
    #[error("partial matrix is not positive definite completable (clique {0})")]
    NotCompletable(usize),

    #[error("matrix is not stored on the expected pattern")]
    PatternMismatch,

    #[error("constraint matrices are linearly dependent")]
    DependentConstraints,

    #[error("iterate is not strictly feasible")]
    InfeasiblePoint,

    #[error("starting point is not strictly feasible: {0}")]
    InfeasibleStart(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("no step decreased the potential")]
    NoDecrease,

    #[error("requested {requested} edges but a simple graph on {n} vertices has at most {max}")]
    TooManyEdges { n: usize, requested: usize, max: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
