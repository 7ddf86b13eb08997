use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A transition's pre/post multisets do not decompose as
    /// `{src, obs} -> {dst, obs}`.
    #[error("transition does not have the immediate-observation shape")]
    NotIO,
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    /// Replaying a trajectory failed at this step index.
    #[error("step {0} of the trajectory is not enabled")]
    InvalidStep(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("cube is empty")]
    EmptyCube,
    /// Saturation generated a cube whose norm exceeds the safety cap. This
    /// indicates a bug, never an answer.
    #[error("saturation overflow: generated norm {norm} exceeds cap {cap}")]
    SaturationOverflow { norm: u64, cap: u64 },
    #[error("explicit state limit of {0} markings exceeded")]
    StateLimitExceeded(usize),
    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),
    /// Two independent routes disagreed on the same question.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
