use thiserror::Error;

/// Errors raised by parsing, validation and the group algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid straight-line program: {0}")]
    InvalidSlp(String),
    #[error("generator a{index} out of range (group has {count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("coordinate tuple has {found} entries, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource bound exceeded: {0}")]
    ResourceLimit(String),
    #[error("element is not in the subgroup")]
    NotMember,
    #[error("element is not in the image of the homomorphism")]
    NotInImage,
    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
