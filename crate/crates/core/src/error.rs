use thiserror::Error;

/// Error type shared by all solver layers.
///
/// Numeric payloads are carried as `f64` regardless of the working scalar so
/// that the error type stays non-generic.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigenpairs live on different grids")]
    GridMismatch,

    #[error(
        "no energy bracket found for state {n} after {expansions} window expansions \
         (last window [{e_lo}, {e_hi}])"
    )]
    BracketNotFound {
        n: usize,
        e_lo: f64,
        e_hi: f64,
        expansions: usize,
    },

    #[error("bisection for state {n} did not converge within {iterations} iterations")]
    NonConvergence { n: usize, iterations: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("while solving state {n}: {source}")]
    State {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Annotate an error with the eigenstate index it occurred for.
    pub fn for_state(self, n: usize) -> Self {
        Error::State {
            n,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
