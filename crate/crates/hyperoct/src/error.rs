use thiserror::Error;

/// Errors shared by the special-function, kernel and quadrature layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer argument {0}")]
    GammaPole(f64),
    #[error("parameter pole: c = {0} is zero or a negative integer")]
    ParameterPole(f64),
    #[error("series did not converge within {max_degree} total-degree shells (partial sum {partial})")]
    NonConvergence { max_degree: usize, partial: f64 },
    #[error("arguments outside the evaluation domain: {0}")]
    OutsideDomain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("evaluation points coincide (r = {0:.3e})")]
    CoincidentPoints(f64),
    #[error("finite-difference stencil leaves the domain at {0}")]
    StencilOutOfDomain(String),
    #[error("quadrature did not converge: last refinement delta {delta:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureNotConverged { delta: f64, tol: f64 },
    #[error("boundary datum on face {face} violates its decay certificate at |x~| = {radius:.3e}")]
    UncertifiedDatum { face: usize, radius: f64 },
    #[error("grid too coarse: refinement delta {delta:.3e} exceeds half the tolerance {tol:.3e}")]
    GridTooCoarse { delta: f64, tol: f64 },
    #[error("evaluation budget of {0} exhausted")]
    BudgetExhausted(usize),
    #[error("invalid configuration at `{path}`: {message}")]
    InvalidConfig { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
