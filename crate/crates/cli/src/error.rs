use filament_ansatz::AnsatzError;
use filament_core::CoreError;
use filament_geometry::GeometryError;
use filament_ode::OdeError;
use filament_reduction::ReductionError;
use thiserror::Error;

/// Failure classes, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    /// A mathematical precondition does not hold (dimension, existence
    /// window, degeneracy, chart radius).
    #[error("condition failed: {0}")]
    Condition(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Condition(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Tolerance(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Dimension(_) => CliError::Condition(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Shape(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::ExistenceCondition(_) | OdeError::Degenerate { .. } | OdeError::NearResonance { .. } => {
                CliError::Condition(e.to_string())
            }
            OdeError::Shape(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Ode(o) => o.into(),
            ReductionError::Grid(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<AnsatzError> for CliError {
    fn from(e: AnsatzError) -> Self {
        match e {
            AnsatzError::ChartRadius { .. } | AnsatzError::OutsideChart { .. } | AnsatzError::StencilStep { .. } => {
                CliError::Condition(e.to_string())
            }
            AnsatzError::Budget(_) | AnsatzError::Input(_) => CliError::Config(e.to_string()),
            AnsatzError::Tolerance { .. } => CliError::Tolerance(e.to_string()),
            AnsatzError::InsufficientSignal(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
