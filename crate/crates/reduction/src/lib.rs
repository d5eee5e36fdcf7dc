//! Reduced problem along the geodesic: σ, the parameter pipeline
//! `μ_0 → e_0 → μ_1 → e_1`, the quadratic form `Q`, and the leading kernel
//! projections the pipeline is meant to cancel.
//!
//! # Regime signs
//!
//! A single [`Regime`] drives every sign. With `s = −1` (subcritical,
//! exponent `p − ε`) and `s = +1` (supercritical, exponent `p + ε`):
//!
//! | quantity | expression |
//! |---|---|
//! | nonlinearity | `u^{p + sε}` |
//! | `μ_0` equation | `−μ̈_0 + a_n σ μ_0 + s b_n / μ_0 = 0` (attractive for `s = −1`) |
//! | `Z_{N+1}`, order ε | `s A_1 − μ_0 μ̈_0 B_3 + μ_0² g_1` |
//! | `Z_0`, order ε | `λ_1 e_0 + s A_3 + μ_0² g_2 + μ̇_0² B_7` |
//! | amplitude | `1 + α_ε = μ_ε^{(N−2) s ε / (2(p − 1 + s ε))}` |
//! | `D_1`, `D_2` ([`LogTermModel::Stated`]) | `s (N−2)²/16 · A_1`, `s (N−2)²/16 · A_3` |
//!
//! The amplitude balances `Δ((1+α)w) + μ_ε^{−(N−2)sε/2} ((1+α)w)^{p+sε}`
//! exactly, so it multiplies the whole order-ε bracket. That bracket
//! vanishes for the pipeline `μ_0`, hence [`LogTermModel::Complete`] has
//! `D_1 = 0` and `D_2 = −s (N−2)²/16 · λ_1 e_0`.

pub mod error;
pub mod pipeline;
pub mod projections;
pub mod quadratic;
pub mod sigma;

pub use error::{ReductionError, Result};
pub use pipeline::{
    compute_e0, compute_e1, compute_mu0, compute_mu1, log_sources, run_pipeline, AnsatzParams, LogTermModel,
    PipelineReport, Regime, zero_shift,
};
pub use projections::{predicted_projections, BracketResiduals, ProjectionPrediction};
pub use quadratic::quadratic_q;
pub use sigma::{compute_sigma, compute_sigma_with, sigma_coefficient, ConventionRow, RicciNorm, SigmaProfile};
