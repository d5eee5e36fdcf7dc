//! `μ_0 → e_0 → μ_1 → e_1` along the geodesic.

use filament_core::BubbleConstants;
use filament_geometry::CurvatureData;
use filament_ode::{
    kappa, solve_l_n1, solve_singular_periodic, LinearSolution, PeriodicFunction, Singularity, SingularOdeProblem,
    SingularOdeSolution, VectorPeriodic,
};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::projections::{predicted_projections, BracketResiduals};
use crate::sigma::{compute_sigma, SigmaProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Exponent `p − ε`.
    Subcritical,
    /// Exponent `p + ε`.
    Supercritical,
}

impl Regime {
    pub fn sign(self) -> f64 {
        match self {
            Regime::Subcritical => -1.0,
            Regime::Supercritical => 1.0,
        }
    }

    pub fn singularity(self) -> Singularity {
        match self {
            Regime::Subcritical => Singularity::Attractive,
            Regime::Supercritical => Singularity::Repulsive,
        }
    }
}

/// Source of the `ε² ln ε` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogTermModel {
    /// Constant `D_1, D_2`, `e_0 = (A_3 − μ_0² g_2)/λ_1` and
    /// `e_1 = (−2μ_0μ_1 − D_2)/λ_1` as written.
    Stated,
    /// Exact amplitude balance: `D_1 = 0`, `D_2 = −s(N−2)²/16 · λ_1 e_0`,
    /// regime sign on `A_3` and the `μ̇_0² B_7` term in the `Z_0` bracket.
    #[default]
    Complete,
}

fn log_factor(constants: &BubbleConstants) -> f64 {
    let n = constants.dim.big_n as f64;
    (n - 2.0).powi(2) / 16.0
}

/// `(D_1, D_2)` on the grid of `e0`.
pub fn log_sources(
    e0: &PeriodicFunction,
    constants: &BubbleConstants,
    regime: Regime,
    model: LogTermModel,
) -> (PeriodicFunction, PeriodicFunction) {
    let s = regime.sign();
    let f = log_factor(constants);
    match model {
        LogTermModel::Stated => (
            e0.map(|_| s * f * constants.a1),
            e0.map(|_| s * f * constants.a3),
        ),
        LogTermModel::Complete => (e0.map(|_| 0.0), e0.map(|e| -s * f * constants.lambda1 * e)),
    }
}

/// Solves `−μ̈ + a_n σ μ + s b_n/μ = 0`.
pub fn compute_mu0(sigma: &PeriodicFunction, constants: &BubbleConstants, regime: Regime) -> Result<SingularOdeSolution> {
    let coeff = sigma.map(|v| constants.a_n * v);
    let problem = SingularOdeProblem::new(coeff, constants.b_n, regime.singularity());
    Ok(solve_singular_periodic(&problem, None)?)
}

pub fn compute_e0(
    mu0: &PeriodicFunction,
    g2: &PeriodicFunction,
    constants: &BubbleConstants,
    regime: Regime,
    model: LogTermModel,
) -> PeriodicFunction {
    let c = constants;
    match model {
        LogTermModel::Stated => mu0.zip(g2, |m, g| (c.a3 - m * m * g) / c.lambda1),
        LogTermModel::Complete => {
            let s = regime.sign();
            let md = mu0.d1();
            let vals = (0..mu0.len())
                .map(|i| {
                    let (m, v) = (mu0.values[i], md.values[i]);
                    -(s * c.a3 + v * v * c.b7 + m * m * g2.values[i]) / c.lambda1
                })
                .collect();
            PeriodicFunction::new(mu0.period, vals)
        }
    }
}

/// Solves `−μ̈_1 μ_0 B_3 + μ_1(−μ̈_0 B_3 + 2μ_0 g_1) + D_1 = 0` after
/// dividing by `μ_0 B_3`; `sigma` is `g_1/(−A_2)`.
pub fn compute_mu1(
    mu0: &PeriodicFunction,
    sigma: &PeriodicFunction,
    constants: &BubbleConstants,
    regime: Regime,
    model: LogTermModel,
) -> Result<LinearSolution> {
    let c = constants;
    let (d1, _) = log_sources(mu0, c, regime, model);
    let mdd = mu0.d2();
    let q = PeriodicFunction::new(
        mu0.period,
        (0..mu0.len())
            .map(|i| -mdd.values[i] / mu0.values[i] - 2.0 * c.a2 * sigma.values[i] / c.b3)
            .collect(),
    );
    let f = d1.zip(mu0, |d, m| -d / (m * c.b3));
    Ok(solve_l_n1(&q, &f)?)
}

pub fn compute_e1(
    mu0: &PeriodicFunction,
    mu1: &PeriodicFunction,
    e0: &PeriodicFunction,
    g2: &PeriodicFunction,
    constants: &BubbleConstants,
    regime: Regime,
    model: LogTermModel,
) -> PeriodicFunction {
    let c = constants;
    let (_, d2) = log_sources(e0, c, regime, model);
    match model {
        LogTermModel::Stated => {
            let vals = (0..mu0.len()).map(|i| (-2.0 * mu0.values[i] * mu1.values[i] - d2.values[i]) / c.lambda1).collect();
            PeriodicFunction::new(mu0.period, vals)
        }
        LogTermModel::Complete => {
            let (m0d, m1d) = (mu0.d1(), mu1.d1());
            let vals = (0..mu0.len())
                .map(|i| {
                    let cross = 2.0 * mu0.values[i] * mu1.values[i] * g2.values[i] + 2.0 * m0d.values[i] * m1d.values[i] * c.b7;
                    -(cross + d2.values[i]) / c.lambda1
                })
                .collect();
            PeriodicFunction::new(mu0.period, vals)
        }
    }
}

/// Parameters of the first-order approximation. Generic parameter sets
/// (not produced by the pipeline) have `pipeline = false`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub mu0: PeriodicFunction,
    pub mu1: PeriodicFunction,
    pub e0: PeriodicFunction,
    pub e1: PeriodicFunction,
    /// Transverse shift in frame components.
    pub d: VectorPeriodic,
    pub eps: f64,
    pub regime: Regime,
    pub model: LogTermModel,
    pub pipeline: bool,
}

impl AnsatzParams {
    /// Constant `μ`, `e = 0`, no shift.
    pub fn generic(period: f64, m: usize, big_n: usize, mu: f64, eps: f64, regime: Regime) -> Self {
        let zero = PeriodicFunction::constant(period, m, 0.0);
        Self {
            mu0: PeriodicFunction::constant(period, m, mu),
            mu1: zero.clone(),
            e0: zero.clone(),
            e1: zero,
            d: zero_shift(period, m, big_n),
            eps,
            regime,
            model: LogTermModel::Complete,
            pipeline: false,
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        Self { eps, ..self.clone() }
    }

    pub fn with_shift(&self, d: VectorPeriodic) -> Self {
        Self { d, ..self.clone() }
    }
}

pub fn zero_shift(period: f64, m: usize, big_n: usize) -> VectorPeriodic {
    VectorPeriodic {
        period,
        values: vec![DVector::zeros(big_n); m],
        twist: DMatrix::identity(big_n, big_n),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub big_n: usize,
    pub regime: Regime,
    pub model: LogTermModel,
    pub sigma: SigmaProfile,
    pub mu0: SingularOdeSolution,
    pub mu1: LinearSolution,
    pub e0: PeriodicFunction,
    pub e1: PeriodicFunction,
    pub d1: PeriodicFunction,
    pub d2: PeriodicFunction,
    /// `a_0 = μ_0²`.
    pub a0: PeriodicFunction,
    pub kappa: f64,
    /// `sup |a_n σ_g1 − g_1/B_3|`.
    pub coefficient_consistency: f64,
    pub brackets: BracketResiduals,
}

impl PipelineReport {
    pub fn params(&self, eps: f64) -> AnsatzParams {
        let m = self.e0.len();
        AnsatzParams {
            mu0: self.mu0.mu.clone(),
            mu1: self.mu1.value.clone(),
            e0: self.e0.clone(),
            e1: self.e1.clone(),
            d: zero_shift(self.e0.period, m, self.big_n),
            eps,
            regime: self.regime,
            model: self.model,
            pipeline: true,
        }
    }
}

pub fn run_pipeline(
    curv: &CurvatureData,
    h: &PeriodicFunction,
    constants: &BubbleConstants,
    regime: Regime,
    model: LogTermModel,
) -> Result<PipelineReport> {
    let sigma = compute_sigma(curv, h, constants)?;
    let mu0 = compute_mu0(&sigma.sigma_g1, constants, regime)?;
    let e0 = compute_e0(&mu0.mu, &sigma.g2, constants, regime, model);
    let mu1 = compute_mu1(&mu0.mu, &sigma.sigma_g1, constants, regime, model)?;
    let e1 = compute_e1(&mu0.mu, &mu1.value, &e0, &sigma.g2, constants, regime, model);
    let (d1, d2) = log_sources(&e0, constants, regime, model);
    let a0 = mu0.mu.map(|m| m * m);
    let kappa = kappa(&a0, constants.lambda1);
    let coefficient_consistency = sigma
        .sigma_g1
        .zip(&sigma.g1, |s, g| constants.a_n * s - g / constants.b3)
        .sup();
    let mut report = PipelineReport {
        big_n: curv.big_n(),
        regime,
        model,
        sigma,
        mu0,
        mu1,
        e0,
        e1,
        d1,
        d2,
        a0,
        kappa,
        coefficient_consistency,
        brackets: BracketResiduals::default(),
    };
    report.brackets = predicted_projections(&report.params(0.0), &report.sigma, curv, constants)?.residuals;
    Ok(report)
}
