//! Model manifolds, closed geodesics, parallel normal frames, Fermi
//! coordinates and curvature.

pub mod error;
pub mod fermi;
pub mod frame;
pub mod geodesic;
pub mod jacobi;
pub mod model;
pub mod tensor;

pub use error::{GeometryError, Result};
pub use fermi::{expansion_check, ExpansionReport, FermiChart, FermiMetric, PerturbedTorusFermi, EXPANSION_SIGN};
pub use frame::{parallel_frame, parallel_frame_from, reversed_holonomy, NormalFrame};
pub use geodesic::{find_closed_geodesic, ClosedGeodesic, GeodesicGuess, GeodesicOptions};
pub use jacobi::jacobi_nondegeneracy;
pub use model::{ManifoldModel, ModelSpec};
pub use tensor::{curvature_at, riemann, CurvatureData, Derivatives, Riemann, ScalarConvention};
