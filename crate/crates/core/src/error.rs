use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Integer range overflow.
    #[error("range error: {0}")]
    Range(String),
    /// A configured resource cap would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Numerical procedure failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Malformed on-disk data.
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Range(_) => "range",
            Error::Resource(_) => "resource",
            Error::Numeric(_) => "numeric",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    /// True for caller mistakes (bad input), false for failures of the
    /// computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Precondition(_) | Error::Range(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($fmt:tt)+) => {
        // written negated so that NaN comparisons fail the check
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !($cond) {
            return Err($crate::Error::$variant(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
