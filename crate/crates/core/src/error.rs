use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence after {sweeps} sweeps (off-diagonal ratio {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    /// A leading minor expected to be positive definite was not.
    #[error("matrix is numerically singular: {0}")]
    Singular(String),
    /// A model could not be evaluated at the requested point.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// The Taylor integrator could not find a usable step.
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },
    /// Shapes of two operands do not agree.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    /// The rejection sampler accepted too few attempts.
    #[error("sampler timeout: {accepted} accepted out of {attempted} attempts")]
    SamplerTimeout { accepted: usize, attempted: u64 },
    /// A piecewise fit collapsed into a single line.
    #[error("degenerate fit: {0}")]
    Degenerate(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::domain(alloc::format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
