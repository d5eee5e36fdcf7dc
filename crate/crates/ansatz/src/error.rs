use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnsatzError {
    #[error("cutoff support needs chart radius {needed}, chart has {radius}")]
    ChartRadius { needed: f64, radius: f64 },
    #[error("point at distance {distance} leaves the chart of radius {radius}")]
    OutsideChart { distance: f64, radius: f64 },
    #[error("finite-difference step {step:e} is not small against μ_ε = {mu:e}")]
    StencilStep { step: f64, mu: f64 },
    #[error("Monte-Carlo budget {0} is below the minimum 10^4")]
    Budget(usize),
    #[error("stderr {stderr:e} exceeds tolerance {tol:e} at budget exhaustion")]
    Tolerance { stderr: f64, tol: f64 },
    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, AnsatzError>;
