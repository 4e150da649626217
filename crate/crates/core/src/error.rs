use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("covariance is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    SingularCovariance { min_eigenvalue: f64 },

    #[error("matrix of size {size} exceeds the subset-enumeration limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("eigenvalues too close to separate (relative gap {relative_gap:e})")]
    DegenerateSpectrum { relative_gap: f64 },

    #[error("shape error: p = {p} rows exceeds q = {q} columns")]
    Shape { p: usize, q: usize },

    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("series did not converge after {terms} terms (residual bound {residual_bound:e})")]
    Convergence { terms: usize, residual_bound: f64 },

    #[error("non-positive moment {value:e} from closed form; eigenvalues are too ill-conditioned")]
    NonPositiveMoment { value: f64 },

    #[error("assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("power-scaling trace is inconclusive: {trace:?}")]
    Inconclusive { trace: Vec<f64> },

    #[error("invalid phase shift {value} (must lie in (-pi, pi])")]
    InvalidPhase { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by user-supplied configuration rather than by a failing
    /// computation.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::InvalidParameter(_))
    }
}
