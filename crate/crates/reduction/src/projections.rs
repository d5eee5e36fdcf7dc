//! Leading-order kernel projections of the residual.

use filament_core::BubbleConstants;
use filament_geometry::{CurvatureData, EXPANSION_SIGN};
use filament_ode::{PeriodicFunction, VectorPeriodic};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{ReductionError, Result};
use crate::pipeline::{log_sources, AnsatzParams, LogTermModel};
use crate::sigma::SigmaProfile;

/// `sup |bracket| / sup |largest term|` for each cancelled bracket.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BracketResiduals {
    pub zn1_eps: f64,
    pub zn1_log: f64,
    pub z0_eps: f64,
    pub z0_log: f64,
}

impl BracketResiduals {
    pub fn max(&self) -> f64 {
        self.zn1_eps.max(self.zn1_log).max(self.z0_eps).max(self.z0_log)
    }
}

/// Per-sample coefficients: the `Z_{N+1}` and `Z_0` projections are
/// `ε · *_eps + ε² ln ε · *_log + O(ε²)`, the `Z_k` projection is
/// `ε^{3/2} zk_k + O(ε²)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectionPrediction {
    pub zn1_eps: PeriodicFunction,
    pub zn1_log: PeriodicFunction,
    pub z0_eps: PeriodicFunction,
    pub z0_log: PeriodicFunction,
    pub zk: VectorPeriodic,
    /// Constant in front of `μ_0(−d̈_k + Σ R_{0k0l} d_l)`; `∫ Z_k²`.
    pub c1: f64,
    /// Constant in front of `−μ_0 μ̈_0`; `∫ Z_{N+1}²`.
    pub c2: f64,
    pub residuals: BracketResiduals,
}

/// Accumulates a bracket sample by sample together with its term scale.
struct Bracket {
    values: Vec<f64>,
    scale: f64,
}

impl Bracket {
    fn new() -> Self {
        Self { values: Vec::new(), scale: 0.0 }
    }

    fn push(&mut self, terms: &[f64]) {
        self.values.push(terms.iter().sum());
        for t in terms {
            self.scale = self.scale.max(t.abs());
        }
    }

    fn finish(self, period: f64) -> (PeriodicFunction, f64) {
        let f = PeriodicFunction::new(period, self.values);
        let rel = if self.scale > 0.0 { f.sup() / self.scale } else { 0.0 };
        (f, rel)
    }
}

pub fn predicted_projections(
    params: &AnsatzParams,
    sigma: &SigmaProfile,
    curv: &CurvatureData,
    constants: &BubbleConstants,
) -> Result<ProjectionPrediction> {
    let m = params.mu0.len();
    if sigma.g1.len() != m || curv.len() != m || params.d.len() != m {
        return Err(ReductionError::Grid("parameters, σ and curvature on different grids".into()));
    }
    let c = constants;
    let s = params.regime.sign();
    let period = params.mu0.period;
    let (mu0, mu1, e0, e1) = (&params.mu0, &params.mu1, &params.e0, &params.e1);
    let (m0d, m0dd, m1d, m1dd) = (mu0.d1(), mu0.d2(), mu1.d1(), mu1.d2());
    let (d1, d2) = log_sources(e0, c, params.regime, params.model);
    let (g1, g2) = (&sigma.g1.values, &sigma.g2.values);

    let mut zn1_eps = Bracket::new();
    let mut zn1_log = Bracket::new();
    let mut z0_eps = Bracket::new();
    let mut z0_log = Bracket::new();
    for i in 0..m {
        let (u, ud, udd) = (mu0.values[i], m0d.values[i], m0dd.values[i]);
        let (v, vd, vdd) = (mu1.values[i], m1d.values[i], m1dd.values[i]);
        zn1_eps.push(&[s * c.a1, -u * udd * c.b3, u * u * g1[i]]);
        zn1_log.push(&[-vdd * u * c.b3, v * (-udd * c.b3 + 2.0 * u * g1[i]), d1.values[i]]);
        match params.model {
            LogTermModel::Stated => {
                z0_eps.push(&[c.lambda1 * e0.values[i], -c.a3, u * u * g2[i]]);
                z0_log.push(&[c.lambda1 * e1.values[i], 2.0 * u * v, d2.values[i]]);
            }
            LogTermModel::Complete => {
                z0_eps.push(&[c.lambda1 * e0.values[i], s * c.a3, u * u * g2[i], ud * ud * c.b7]);
                z0_log.push(&[
                    c.lambda1 * e1.values[i],
                    2.0 * u * v * g2[i],
                    2.0 * ud * vd * c.b7,
                    d2.values[i],
                ]);
            }
        }
    }
    let (zn1_eps, r1) = zn1_eps.finish(period);
    let (zn1_log, r2) = zn1_log.finish(period);
    let (z0_eps, r3) = z0_eps.finish(period);
    let (z0_log, r4) = z0_log.finish(period);

    let ddd = params.d.d2();
    let zk_vals = (0..m)
        .map(|i| {
            let p = curv.r0k0l_matrix(i) * EXPANSION_SIGN;
            (-&ddd.values[i] + p * &params.d.values[i]) * (c.b4 * mu0.values[i])
        })
        .collect::<Vec<DVector<f64>>>();
    let zk = VectorPeriodic { period, values: zk_vals, twist: params.d.twist.clone() };

    Ok(ProjectionPrediction {
        zn1_eps,
        zn1_log,
        z0_eps,
        z0_log,
        zk,
        c1: c.b4,
        c2: c.b3,
        residuals: BracketResiduals { zn1_eps: r1, zn1_log: r2, z0_eps: r3, z0_log: r4 },
    })
}
