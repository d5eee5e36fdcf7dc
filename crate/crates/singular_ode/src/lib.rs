//! Periodic problems for the concentration parameters: the singular
//! equation, its linearization, and the linear solvers of the reduced system.

pub mod error;
pub mod linear;
pub mod periodic;
pub mod singular;

pub use error::{OdeError, Result};
pub use linear::{gap_check, kappa, l0_resonances, solve_l_0, solve_l_k, solve_l_n1, GapReport, LinearSolution, Resonance, VectorSolution};
pub use periodic::{PeriodicFunction, TrigInterp, VectorPeriodic, SCHEME_ORDER};
pub use singular::{
    linearized_nondegeneracy, perturb_to_nondegenerate, scalar_monodromy, solve_singular_periodic, ExistenceWindow,
    Singularity, SingularOdeProblem, SingularOdeSolution,
};
