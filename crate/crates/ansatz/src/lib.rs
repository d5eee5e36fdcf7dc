//! First-order approximate solution in Fermi coordinates, its residual under
//! the exact Laplace–Beltrami operator, and Monte-Carlo kernel projections.

pub mod error;
pub mod field;
pub mod montecarlo;
pub mod sweep;

pub use error::{AnsatzError, Result};
pub use field::{assemble, chi, residual_at, AnsatzField, AnsatzOptions, FieldSlice, ParamPoint};
pub use montecarlo::{project_channels, project_residual, Channel, Estimate, RadialSampler};
pub use sweep::{fit_slope, scaling_sweep, EpsRow, PointwiseStats, ResidualReport, SlopeFit, SweepConfig};
