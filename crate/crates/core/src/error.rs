use thiserror::Error;

/// Syntax error in polynomial text, with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

/// A well-formed problem instance that violates a standing assumption.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("degree must be at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("a0 must be non-zero")]
    ZeroConstantTerm,
    #[error("coefficient a{index} is not finite")]
    NonFinite { index: usize },
    #[error("expected {expected} coefficients a0..a{}, got {got}", expected - 1)]
    CoefficientCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series diverged: W({q}) has a non-finite component")]
    Divergence { q: usize },
    #[error("beta_{m} is not representable (rho^(m/n) overflow or underflow)")]
    BetaOverflow { m: usize },
    #[error("truncation order {q} exceeds the {m_max} computed terms")]
    TermsExceeded { q: usize, m_max: usize },
    #[error("at least {min} terms are required, got {got}")]
    TooFewTerms { min: usize, got: usize },
    #[error("matrix dimension requires n >= 2, got {0}")]
    Dimension(usize),
    #[error("phase index {k} out of range for degree {n}")]
    Phase { k: usize, n: usize },
    #[error("V-path supports at most {max} terms, got {got}")]
    VPathTooLong { max: usize, got: usize },
    #[error("length mismatch: {left} estimates vs {right} reference roots")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}
