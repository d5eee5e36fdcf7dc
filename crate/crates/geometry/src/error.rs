use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("metric not positive definite at {0:?}")]
    NotPositiveDefinite(Vec<f64>),
    #[error("finite-difference step {0} too small")]
    StepUnderflow(f64),
    #[error("closed-geodesic Newton diverged, last defect {defect:e}")]
    NewtonDivergence { defect: f64 },
    #[error("period collapsed to {0}")]
    PeriodCollapse(f64),
    #[error("frame lost orthonormality: error {0:e}")]
    FrameDegeneracy(f64),
    #[error("integration left the chart domain at {0:?}")]
    LeftChart(Vec<f64>),
    #[error("stencil accuracy insufficient: extrapolated error {0:e}")]
    StencilAccuracy(f64),
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
