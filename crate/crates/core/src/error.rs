use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate abscissa at index {index}")]
    DuplicateAbscissa { index: usize },

    #[error("abscissae not increasing at index {index}")]
    NonIncreasingAbscissa { index: usize },

    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("abscissae and values differ in length ({abscissae} vs {values})")]
    LengthMismatch { abscissae: usize, values: usize },

    #[error("invalid position vector {vector:?}: {reason}")]
    InvalidPositionVector { vector: Vec<u32>, reason: String },

    #[error("position vector {0:?} is not regular")]
    NotRegular(Vec<u32>),

    #[error("least-squares design matrix is rank deficient")]
    RankDeficient,

    #[error("{0}")]
    Precondition(String),

    #[error("integer overflow while counting {0}")]
    Overflow(&'static str),

    #[error("oracle would examine {required} knot subsets, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for failures caused by the environment rather than by the input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
