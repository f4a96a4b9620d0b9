use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("integration path leaves the upper half-plane: {0}")]
    BadPath(String),
    #[error("integrand has a pole on the integration path: {0}")]
    PoleOnPath(String),
    #[error("finite-difference step too large: {0}")]
    StepTooLarge(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("series hit the iteration cap: {0}")]
    SeriesDivergence(String),
    #[error("unsupported weight {0}")]
    UnsupportedWeight(i32),
    #[error("certified tail {tail:e} exceeds tolerance {tol:e}")]
    TailTooLarge { tail: f64, tol: f64 },
    #[error("outside the region of absolute convergence: {0}")]
    OutOfRegion(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("slash at weight {m} leaves polynomials of degree <= {n}")]
    NonPolynomialResult { m: i32, n: usize },
    #[error("polynomial is not in W (residual {0:e})")]
    NotInW(f64),
    #[error("rank-deficient least-squares system")]
    RankDeficient,
    #[error("Richardson extrapolation unstable: {0}")]
    ExtrapolationUnstable(String),
    #[error("integral is not regularizable: {0}")]
    NotRegularizable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input, unsupported parameters, malformed files.
    Domain,
    /// A numerical procedure failed to reach its target.
    Convergence,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonConvergent(_)
            | Error::SeriesDivergence(_)
            | Error::TailTooLarge { .. }
            | Error::ExtrapolationUnstable(_)
            | Error::RankDeficient => ErrorClass::Convergence,
            _ => ErrorClass::Domain,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
