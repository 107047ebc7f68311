use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic mixes +inf and -inf")]
    InfiniteArithmetic,

    #[error("malformed number `{0}`")]
    MalformedNumber(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("malformed cycle: {0}")]
    MalformedCycle(String),

    #[error("malformed lasso play: {0}")]
    MalformedLasso(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("linear system is unbounded: {0}")]
    Unbounded(String),

    #[error("invalid punishment family: {0}")]
    InvalidFamily(String),

    #[error("invalid prover strategy: {0}")]
    InvalidStrategy(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// True for outcomes that only reflect an enumeration or iteration cap,
    /// as opposed to malformed input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
