//! Standard bubble of the critical transverse problem, its linearized
//! spectrum, and the projection constants used by the reduction.

pub mod bubble;
pub mod constants;
pub mod dim;
pub mod eigen;
pub mod error;
pub mod floquet;
pub mod ipq;
pub mod kernel;
pub mod numerics;
pub mod radial;
pub mod series;

pub use bubble::{eval_bubble, eval_kernel};
pub use constants::{compute_constants, compute_constants_with, BubbleConstants, ClosedForms};
pub use dim::Dimension;
pub use eigen::{solve_negative_eigenpair, EigenPair, GridPolicy};
pub use error::{CoreError, Result};
pub use ipq::ipq;
pub use kernel::kernel_residual;
pub use series::CosineSeries;
