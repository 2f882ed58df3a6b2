use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension {dim} for {family}: {reason}")]
    InvalidDimension {
        family: &'static str,
        dim: u32,
        reason: &'static str,
    },

    /// A closed form that must produce an integer did not.
    #[error("closed form for {what} evaluated to non-integer {value}")]
    InternalNonInteger { what: String, value: String },

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("negative eigenvalue {0}")]
    NegativeEigenvalue(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("insufficient levels: need {needed} eigenvalues, spectrum holds {available}")]
    InsufficientLevels { needed: u64, available: u64 },

    #[error("invalid torus moduli: {0}")]
    InvalidModuli(String),

    #[error("empty input")]
    EmptyInput,

    #[error("N = {0} is not a gap index")]
    NotAGap(u64),

    #[error("growth condition violated at recurrence step {0}")]
    GrowthConditionViolated(usize),

    #[error("zero vector in dual-vector set")]
    ZeroVector,

    #[error("empty eigenspace at nu = {0}")]
    EmptyEigenspace(String),

    #[error("insufficient cutoff: {0}")]
    InsufficientCutoff(String),

    #[error("sample out of range: {0}")]
    SampleOutOfRange(String),

    #[error("value does not fit: {0}")]
    Overflow(String),
}
