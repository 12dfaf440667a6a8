use thiserror::Error;

/// Errors raised across the crate.
///
/// Every variant maps to a stable machine-readable code via [`Error::code`],
/// which is what the command-line front end reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported (p = {0})")]
    EvenCharacteristic(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field of order {0} is too large")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input")]
    ZeroInput,
    #[error("element is not a square")]
    NotASquare,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("invalid defining matrix: {0}")]
    InvalidDefiningMatrix(String),
    #[error("V·V has dimension {0}, expected 1")]
    ProductNotOneDimensional(usize),
    #[error("annihilator dimension d = {0} is unsupported here, reduce to d = 1 first")]
    UnsupportedD(usize),
    #[error("space of size {0} is too large for an exhaustive check")]
    TooLargeForExhaustive(u64),
    #[error("table of size {0} is too large")]
    TooLarge(u64),
    #[error("search space of size {0} is too large")]
    SearchSpaceTooLarge(u64),
    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),
    #[error("not isomorphic")]
    NotIsomorphic,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EvenCharacteristic(_) => "EvenCharacteristic",
            Error::NotPrime(_) => "NotPrime",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::SpecMismatch => "SpecMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroInput => "ZeroInput",
            Error::NotASquare => "NotASquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSymmetric => "NotSymmetric",
            Error::DegenerateForm => "DegenerateForm",
            Error::InvalidDefiningMatrix(_) => "InvalidDefiningMatrix",
            Error::ProductNotOneDimensional(_) => "ProductNotOneDimensional",
            Error::UnsupportedD(_) => "UnsupportedD",
            Error::TooLargeForExhaustive(_) => "TooLargeForExhaustive",
            Error::TooLarge(_) => "TooLarge",
            Error::SearchSpaceTooLarge(_) => "SearchSpaceTooLarge",
            Error::IdentityMismatch(_) => "IdentityMismatch",
            Error::NotIsomorphic => "NotIsomorphic",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(what: impl Into<String>) -> Error {
    Error::DimensionMismatch(what.into())
}
