use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("variable x{index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("transcendental function `{0}` cannot be evaluated exactly")]
    Transcendental(&'static str),

    #[error("evaluation produced a non-finite value")]
    NonFinite,

    #[error("interpolation nodes are not pairwise distinct")]
    DuplicateNodes,

    #[error("malformed polynomial data: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
