use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("existence condition failed: {0}")]
    ExistenceCondition(String),
    #[error("Newton failed after {iters} iterations, residual {residual:e}")]
    NewtonFailure { iters: usize, residual: f64 },
    #[error("iterate lost positivity")]
    Positivity,
    #[error("homogeneous problem is degenerate: distance to 1 is {distance:e}")]
    Degenerate { distance: f64 },
    #[error("ε = {eps} is within the gap tolerance of the resonance ε_{m} = {resonance}")]
    NearResonance { eps: f64, resonance: f64, m: usize },
    #[error("no nondegenerate perturbation found in {0} draws")]
    RetryBudget(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, OdeError>;
