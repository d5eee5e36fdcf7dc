//! σ along the geodesic by two routes: the curvature formula in terms of
//! scalar and Ricci curvature, and `g_1 / (−A_2)` from the projection
//! constants.

use filament_core::BubbleConstants;
use filament_geometry::{CurvatureData, ScalarConvention, EXPANSION_SIGN};
use filament_ode::PeriodicFunction;
use serde::{Deserialize, Serialize};

use crate::error::{ReductionError, Result};

/// How `Ric(γ̇, γ̇)` enters the curvature formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RicciNorm {
    /// `Σ_j R_{0j0j}`.
    Trace,
    /// `Σ_j R_{0j0j} / N`.
    Mean,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConventionRow {
    pub scalar: ScalarConvention,
    pub ricci: RicciNorm,
    /// `sup |σ − σ_g1|` under this setting.
    pub gap: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaProfile {
    pub h: PeriodicFunction,
    /// `h − k (R_g − (N/4) Ric)` under `convention` and `ricci`.
    pub sigma: PeriodicFunction,
    /// `g_1 / (−A_2)`.
    pub sigma_g1: PeriodicFunction,
    pub g1: PeriodicFunction,
    pub g2: PeriodicFunction,
    pub convention: ScalarConvention,
    pub ricci: RicciNorm,
    pub route_gap: f64,
    /// Both routes for every convention setting.
    pub table: Vec<ConventionRow>,
}

pub const ROUTE_TOL: f64 = 1e-8;

/// `(N−2)(N−3) / (3(N−1))`, the factor in front of the curvature bracket.
pub fn sigma_coefficient(big_n: usize) -> f64 {
    let n = big_n as f64;
    (n - 2.0) * (n - 3.0) / (3.0 * (n - 1.0))
}

fn route_curvature(curv: &CurvatureData, h: &PeriodicFunction, scalar: ScalarConvention, ricci: RicciNorm) -> PeriodicFunction {
    let nn = curv.big_n();
    let k = sigma_coefficient(nn);
    let vals = (0..curv.len())
        .map(|s| {
            let full = curv.normal_sum(s) + 2.0 * curv.ricci00(s);
            let rg = match scalar {
                ScalarConvention::FullSum => full,
                ScalarConvention::HalfSum => 0.5 * full,
            };
            let ric = match ricci {
                RicciNorm::Trace => curv.ricci00(s),
                RicciNorm::Mean => curv.ricci00(s) / nn as f64,
            };
            h.values[s] - k * EXPANSION_SIGN * (rg - 0.25 * nn as f64 * ric)
        })
        .collect();
    PeriodicFunction::new(h.period, vals)
}

/// `Σ_{i,j} ⅔ R_{ijij} + Σ_j R_{0j0j}` in the expansion's sign convention.
fn curvature_bracket(curv: &CurvatureData, s: usize) -> f64 {
    EXPANSION_SIGN * (2.0 / 3.0 * curv.normal_sum(s) + curv.ricci00(s))
}

pub fn compute_sigma(curv: &CurvatureData, h: &PeriodicFunction, constants: &BubbleConstants) -> Result<SigmaProfile> {
    compute_sigma_with(curv, h, constants, RicciNorm::Mean)
}

pub fn compute_sigma_with(
    curv: &CurvatureData,
    h: &PeriodicFunction,
    constants: &BubbleConstants,
    ricci: RicciNorm,
) -> Result<SigmaProfile> {
    if curv.len() != h.len() {
        return Err(ReductionError::Grid(format!("{} curvature samples, {} h samples", curv.len(), h.len())));
    }
    let c = constants;
    let g1 = PeriodicFunction::new(
        h.period,
        (0..h.len()).map(|s| -c.a2 * h.values[s] + curvature_bracket(curv, s) * c.b2).collect(),
    );
    let g2 = PeriodicFunction::new(
        h.period,
        (0..h.len()).map(|s| -c.a4 * h.values[s] + curvature_bracket(curv, s) * c.b6).collect(),
    );
    let sigma_g1 = g1.map(|v| v / -c.a2);
    let gap = |a: &PeriodicFunction| a.zip(&sigma_g1, |x, y| x - y).sup();

    let mut table = Vec::new();
    for scalar in [ScalarConvention::FullSum, ScalarConvention::HalfSum] {
        for rn in [RicciNorm::Trace, RicciNorm::Mean] {
            let g = gap(&route_curvature(curv, h, scalar, rn));
            table.push(ConventionRow { scalar, ricci: rn, gap: g, agrees: g <= ROUTE_TOL });
        }
    }
    let sigma = route_curvature(curv, h, curv.convention, ricci);
    let route_gap = gap(&sigma);
    Ok(SigmaProfile { h: h.clone(), sigma, sigma_g1, g1, g2, convention: curv.convention, ricci, route_gap, table })
}
