use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid coefficient index {index} (valid range 1..={truncation})")]
    InvalidIndex { index: i64, truncation: usize },

    #[error("requested truncation {requested} exceeds available truncation {available}")]
    TruncationExceeded { requested: usize, available: usize },

    #[error("truncation must be at least 1")]
    EmptyTruncation,

    #[error("exp requires a series without constant term (found a_1 = {re}{im:+}i)")]
    ConstantTerm { re: f64, im: f64 },

    #[error("{op} requires an exact Dirichlet polynomial")]
    NotExact { op: &'static str },

    #[error("translation parameter must be nonnegative and finite, got {0}")]
    InvalidTranslation(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid quadrature specification: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature did not converge: estimate {estimate:e} vs {refined:e} after node doubling (tol {tolerance:e})")]
    QuadratureNonConvergence {
        estimate: f64,
        refined: f64,
        tolerance: f64,
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("invalid exponent p = {0} (need p >= 1)")]
    InvalidExponent(f64),

    #[error("quasi-Monte Carlo estimate did not converge: value {estimate:e}, stderr {stderr:e}, replicate spread {spread:e}")]
    QmcNonConvergence {
        estimate: f64,
        stderr: f64,
        spread: f64,
    },

    #[error("series {what} diverges; smallest convergent abscissa is {abscissa}")]
    Divergent { what: &'static str, abscissa: f64 },

    #[error("pole: {what} is singular at {at}")]
    Pole { what: &'static str, at: f64 },

    #[error("point evaluation is unbounded for Re s = {0} <= 1/2")]
    UnboundedFunctional(f64),

    #[error("n^c0 = {n}^{c0} exceeds truncation {truncation}; raise N")]
    TruncationEmpty { n: usize, c0: u32, truncation: usize },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Numeric failures (as opposed to rejected input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::NonFinite(_)
                | Error::QmcNonConvergence { .. }
                | Error::Divergent { .. }
                | Error::Pole { .. }
                | Error::UnboundedFunctional(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
