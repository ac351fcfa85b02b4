use thiserror::Error;

/// Errors raised by the library. Variant names double as stable diagnostic
/// tags in the CLI (see [`Error::kind`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability at index {index} is {value}, must be strictly positive")]
    NonPositiveProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, which is not within 1e-9 of 1")]
    NotNormalized { sum: f64 },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("{labels} labels but {probs} probabilities")]
    LengthMismatch { labels: usize, probs: usize },

    #[error("alphabet needs at least 2 symbols, got {0}")]
    TooFewSymbols(usize),

    #[error("distributions are defined on different alphabets")]
    AlphabetMismatch,

    #[error("{0}")]
    DomainError(String),

    #[error("log-likelihood-ratio increments are identically zero (p1 = p2)")]
    DegenerateIncrements,

    #[error("{0}")]
    OutOfDomain(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("thresholds (upper {upper}, lower {lower}) must satisfy -D(P2||P1) = {min} < lower <= upper < D(P1||P2) = {max}")]
    InadmissibleThresholds {
        upper: f64,
        lower: f64,
        min: f64,
        max: f64,
    },

    #[error("exact tail oracle requires a binary alphabet, got {0} symbols")]
    NotBinary(usize),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Variant name, used as a machine-greppable tag in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveProbability { .. } => "NonPositiveProbability",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooFewSymbols(_) => "TooFewSymbols",
            Error::AlphabetMismatch => "AlphabetMismatch",
            Error::DomainError(_) => "DomainError",
            Error::DegenerateIncrements => "DegenerateIncrements",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InadmissibleThresholds { .. } => "InadmissibleThresholds",
            Error::NotBinary(_) => "NotBinary",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::InvariantViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}
