use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("argument outside the domain of {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("quadrature did not converge after {levels} levels (last difference {last_diff})")]
    NonConvergence { levels: u32, last_diff: String },

    #[error("value underflows 2^(-2·bits) at z = {0}")]
    Underflow(String),

    #[error("pole of the integrand lies on the integration contour")]
    PoleOnContour,

    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("Hankel factorization lost positivity at pivot {index} (value {value})")]
    LossOfPositivity { index: usize, value: String },

    #[error("nullspace dimension is not one: smallest singular values {0} and {1}")]
    NullspaceDimension(String, String),

    #[error("construction routes disagree: {0}")]
    RouteMismatch(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    /// True for failures of the numerical machinery itself (as opposed to
    /// bad inputs); the CLI maps these to exit code 3.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain { .. } | Error::InvalidContext(_) | Error::Pole(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
