use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Adaptive quadrature ran out of subdivisions before reaching tolerance.
    #[error("quadrature did not converge on [{lo}, {hi}]: error estimate {err_estimate:e} after {subdivisions} subdivisions ({context})")]
    ConvergenceFailure {
        lo: f64,
        hi: f64,
        err_estimate: f64,
        subdivisions: usize,
        context: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::ConvergenceFailure { .. })
    }

    /// Attaches a human-readable location to a convergence failure; other
    /// variants pass through unchanged.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::ConvergenceFailure {
                lo,
                hi,
                err_estimate,
                subdivisions,
                context,
            } => {
                let ctx = ctx.into();
                let context = if context.is_empty() {
                    ctx
                } else {
                    format!("{ctx}; {context}")
                };
                Error::ConvergenceFailure {
                    lo,
                    hi,
                    err_estimate,
                    subdivisions,
                    context,
                }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
