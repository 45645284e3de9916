use thiserror::Error;

/// Library-wide error type. `exit_code` gives the CLI mapping:
/// 1 for domain errors, 2 for resource/budget errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{m} is not a totient (empty preimage)")]
    NotTotient { m: u64 },

    #[error("64-bit overflow: {0}")]
    Overflow(String),

    #[error("residue error: {0}")]
    Residue(String),

    #[error("criterion violated: {0}")]
    CriterionViolated(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("bound error: {0}")]
    Bound(String),

    #[error("multiplicity of {m} is {found}, expected {expected}")]
    Multiplicity { m: u64, found: usize, expected: usize },

    #[error("set too small: need at least {needed} elements, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("no progression of length >= 3 in the set")]
    NoProgression,

    #[error("classification failed for m = {m}: {detail}")]
    ClassificationFailed { m: u64, detail: String },

    #[error("resource limit exceeded: {what} needs {requested} bytes, budget is {limit}")]
    Resource { what: String, requested: u64, limit: u64 },

    #[error("scan budget exceeded: {what} needs {requested}, budget is {limit}")]
    Budget { what: String, requested: u64, limit: u64 },

    #[error("sieve horizon too small: need {required}, have {have}")]
    HorizonTooSmall { required: u64, have: u64 },

    #[error("corrupt sieve cache: {0}")]
    CorruptCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::NotTotient { .. }
            | Error::Overflow(_)
            | Error::Residue(_)
            | Error::CriterionViolated(_)
            | Error::Hypothesis(_)
            | Error::Bound(_)
            | Error::Multiplicity { .. }
            | Error::TooSmall { .. }
            | Error::NoProgression
            | Error::ClassificationFailed { .. } => 1,
            Error::Resource { .. }
            | Error::Budget { .. }
            | Error::HorizonTooSmall { .. }
            | Error::CorruptCache(_)
            | Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
