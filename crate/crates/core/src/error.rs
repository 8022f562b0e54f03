use thiserror::Error;

/// Errors raised by the core set/family algebra and the text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground size {0} is outside 1..=16")]
    GroundSize(usize),
    #[error("element {element} is outside 1..={n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("bits {bits:#x} do not fit a ground set of size {n}")]
    BitsOutOfRange { bits: u32, n: usize },
    #[error("ground sizes differ: {0} vs {1}")]
    GroundSizeMismatch(usize, usize),
    #[error("not a bijection of 1..={0}")]
    NotABijection(usize),
    #[error("canonical form needs n <= {max}, got {n}")]
    TooLargeForCanonical { n: usize, max: usize },
    #[error("level k={k} out of range for n={n}")]
    LevelOutOfRange { n: usize, k: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
