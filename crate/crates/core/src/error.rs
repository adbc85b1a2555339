use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the invariant computations.
///
/// Every variant maps onto one of the process exit codes used by the CLI:
/// 1 for bad input, 2 for inputs outside the supported class, 3 for internal
/// consistency failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a polynomial: primitive {witness}-th roots of unity have negative multiplicity")]
    NotPolynomial { witness: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not divisible: {0}")]
    NonDivisible(String),

    #[error("not quasi-unipotent: characteristic polynomial has the non-cyclotomic factor {0}")]
    NotQuasiUnipotent(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("non-reduced/monomial germ: {0}")]
    NotReduced(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("non-integral multiplicity: {0}")]
    NonIntegralMultiplicity(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPolynomial { .. }
            | Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::NonDivisible(_)
            | Error::NotQuasiUnipotent(_)
            | Error::NotNilpotent => 1,
            Error::NotReduced(_) | Error::Unsupported(_) | Error::Indeterminate(_) => 2,
            Error::NonIntegralMultiplicity(_) | Error::Internal(_) => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
