use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain: {0}")]
    Domain(String),

    /// A series failed to meet its tolerances within the term budget.
    #[error("no convergence in {context} after {terms} terms")]
    NoConvergence { context: &'static str, terms: usize },

    /// The requested series cannot converge for these arguments.
    #[error("divergent series: {0}")]
    Divergence(String),

    /// Adaptive quadrature exhausted its evaluation budget.
    #[error("quadrature budget exhausted in {context} (error estimate {estimate:.3e})")]
    QuadratureBudget { context: &'static str, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
