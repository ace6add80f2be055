use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`])
/// which the command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("characteristic polynomial does not split over the base field: {0}")]
    NonSplittingSpectrum(String),
    #[error("polynomial is not multilinear: {0}")]
    NotMultilinear(String),
    #[error("arity mismatch: polynomial has {expected} variables, got {got} arguments")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomial is not proper: {0}")]
    NotProper(String),
    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),
    #[error("matrix is central (a scalar matrix)")]
    CentralMatrix,
    #[error("target has nonzero trace")]
    TraceNonzero,
    #[error("lambda must differ from -1")]
    LambdaIsMinusOne,
    #[error("dimension below the required bound: {0}")]
    BelowBound(String),
    #[error("indices must be distinct")]
    EqualIndices,
    #[error("linear system is inconsistent: {0}")]
    Inconsistent(String),
    #[error("target is not in the image of the linear slice")]
    TargetNotInSlice,
    #[error("no admissible diagonal plan: {0}")]
    DegenerateDenominator(String),
    #[error("search exhausted after {attempts} attempts: {detail}")]
    SearchExhausted { attempts: usize, detail: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable error code string.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DIVISION_BY_ZERO",
            Error::FieldMismatch(_) => "FIELD_MISMATCH",
            Error::Syntax(_) => "SYNTAX_ERROR",
            Error::InvalidField(_) => "INVALID_FIELD",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::IndexOutOfRange(_) => "INDEX_OUT_OF_RANGE",
            Error::SingularMatrix => "SINGULAR_MATRIX",
            Error::NonSplittingSpectrum(_) => "NON_SPLITTING_SPECTRUM",
            Error::NotMultilinear(_) => "NOT_MULTILINEAR",
            Error::ArityMismatch { .. } => "ARITY_MISMATCH",
            Error::NotProper(_) => "NOT_PROPER",
            Error::UnsupportedDegree(_) => "UNSUPPORTED_DEGREE",
            Error::CentralMatrix => "CENTRAL_MATRIX",
            Error::TraceNonzero => "TRACE_NONZERO",
            Error::LambdaIsMinusOne => "LAMBDA_IS_MINUS_ONE",
            Error::BelowBound(_) => "BELOW_BOUND",
            Error::EqualIndices => "EQUAL_INDICES",
            Error::Inconsistent(_) => "INCONSISTENT",
            Error::TargetNotInSlice => "TARGET_NOT_IN_SLICE",
            Error::DegenerateDenominator(_) => "DEGENERATE_DENOMINATOR",
            Error::SearchExhausted { .. } => "SEARCH_EXHAUSTED",
            Error::BudgetExceeded(_) => "BUDGET_EXCEEDED",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::InvalidInput(_) => "INVALID_INPUT",
            Error::Internal(_) => "INTERNAL",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
