use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("unsupported field order {0}: need an odd prime no larger than 7")]
    UnsupportedOrder(u32),
    #[error("cannot span a line from two equal points")]
    DegenerateSpan,
    #[error("the two lines are identical")]
    IdenticalLines,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a spread: {0}")]
    InvalidSpread(String),
    #[error("circle set is not a {k}-web")]
    NotAWeb { k: u32 },
    #[error("invalid replacement: {0}")]
    InvalidReplacement(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
