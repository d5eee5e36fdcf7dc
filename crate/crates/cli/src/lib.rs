//! Reproducible experiment runner: TOML configs in, versioned JSON and CSV
//! reports out.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_constants, cmd_geodesic, cmd_ode, cmd_reduce, cmd_residual};
pub use config::{ModelConfig, RunConfig, SCHEMA_VERSION};
pub use error::{CliError, Result};
pub use report::{CommandOutput, Report};
