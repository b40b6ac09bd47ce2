use thiserror::Error;

/// Errors produced by the model, the analytic evaluators and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter or run setting is outside its valid range.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A function argument is outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge (estimate {estimate:e}, error bound {error_bound:e})")]
    Quadrature { estimate: f64, error_bound: f64 },

    /// A root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },

    /// The realization has no interferer inside its window.
    #[error("empty window: the realization has no interferers")]
    EmptyWindow,

    /// Any other numerical breakdown (non-finite values, violated invariants).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
