use thiserror::Error;

/// Errors produced by the numerical kernels and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported Meijer-G case (m,n,p,q) = ({m},{n},{p},{q})")]
    UnsupportedCase { m: usize, n: usize, p: usize, q: usize },

    #[error("contour quadrature did not converge (residual estimate {residual:.3e})")]
    Convergence { residual: f64 },

    #[error("truncation dimension {dim} too small: tail bound {tail:.3e}, need dimension {needed}")]
    Truncation { dim: usize, tail: f64, needed: usize },

    #[error("accuracy error: {what} (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Accuracy {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("moment quadrature did not converge; relative residuals per n: {residuals:?}")]
    MomentConvergence { residuals: Vec<(usize, f64)> },

    #[error("undefined statistic: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
