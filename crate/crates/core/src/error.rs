use thiserror::Error;

pub type Result<T, E = RwError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RwError {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite value in {stage} at iteration {iteration}")]
    NonFinite { stage: &'static str, iteration: usize },

    /// The solver ran out of iterations before its stopping rule fired.
    #[error("{stage} reached the iteration cap ({cap}) with last change {last_change:e}")]
    IterationCap {
        stage: &'static str,
        cap: usize,
        last_change: f64,
    },

    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The hypotheses of a certificate theorem do not hold for this input.
    #[error("no certificate: {0}")]
    NoCertificate(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("no label flip found up to radius {ceiling}")]
    NoUpperBracket { ceiling: f64 },
}

impl RwError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        RwError::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
