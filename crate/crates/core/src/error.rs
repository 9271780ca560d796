use thiserror::Error;

/// Errors raised by the library's operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("pairing is degenerate; witness {0}")]
    DegeneratePairing(String),
    #[error("side mismatch: expected {expected}, found {found}")]
    SideMismatch { expected: String, found: String },
    #[error("subspaces are not comparable: {0} / {1}")]
    NotAChain(String, String),
    #[error("not a taut couple: perp of {0} is missing from the partner flag")]
    NotTaut(String),
    #[error("flag is not semiclosed at pair {0}")]
    NotSemiclosed(usize),
    #[error("model has no bilinear form")]
    NoFormOnModel,
    #[error("form kind mismatch: {0}")]
    WrongFormKind(String),
    #[error("objects belong to different models")]
    ModelMismatch,
    #[error("element is not in the joint stabilizer")]
    NotInJointStabilizer,
    #[error("algebra is not splittable; witness {0}")]
    NotSplittable(String),
    #[error("input is not parabolic: {0}")]
    NotParabolicInput(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
