use thiserror::Error;

/// Errors raised across the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mismatched arity: expected {expected} variables, got {found}")]
    MismatchedArity { expected: usize, found: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown symbol `{symbol}` at line {line}, column {column}")]
    UnknownSymbol {
        symbol: String,
        line: usize,
        column: usize,
    },

    #[error("exponent must be a natural number (line {line}, column {column})")]
    NonNaturalExponent { line: usize, column: usize },

    #[error("exponent overflow: {0} exceeds 2^31-1")]
    ExponentOverflow(u64),

    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("support has no nonzero exponent (polynomial is constant)")]
    EmptySupport,

    #[error("zero vector is not a valid point")]
    ZeroVector,

    #[error("point lies on the zero locus of f (|f| = {modulus:e})")]
    OnZeroLocus { modulus: f64 },

    #[error("flow field construction failed at {point:?}: {reason}")]
    FieldConstructionFailed { point: Vec<(f64, f64)>, reason: String },

    #[error("incomplete hypothesis ledger: missing {0}")]
    IncompleteLedger(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by the user's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownSymbol { .. }
                | Error::NonNaturalExponent { .. }
                | Error::ExponentOverflow(_)
                | Error::ZeroPolynomial
                | Error::EmptySupport
                | Error::MismatchedArity { .. }
                | Error::Config(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
