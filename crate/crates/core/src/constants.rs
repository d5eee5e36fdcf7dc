//! Projection constants of the reduction, all reduced to radial integrals.

use serde::{Deserialize, Serialize};

use crate::bubble::{ln_w, w, w_r, w_rr, z_dil};
use crate::dim::Dimension;
use crate::eigen::{solve_negative_eigenpair, EigenPair, GridPolicy};
use crate::error::{CoreError, Result};
use crate::ipq::ipq;
use crate::numerics::{integrate_half_line, simpson};

const REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleConstants {
    pub dim: Dimension,
    pub lambda1: f64,
    /// `∫ w^p ln w Z_{N+1}`.
    pub a1: f64,
    /// Same constant as `N/(p+1)^2 ∫ w^{p+1}`.
    pub a1_alt: f64,
    /// `∫ w Z_{N+1}`.
    pub a2: f64,
    /// `∫ w^p ln w Z_0`.
    pub a3: f64,
    /// `∫ w Z_0`.
    pub a4: f64,
    /// `∫ ∂_ii w Z_{N+1}` (no sum).
    pub b1: f64,
    /// `∫ y_j ∂_j w Z_{N+1}` (no sum).
    pub b2: f64,
    /// `∫ Z_{N+1}^2`.
    pub b3: f64,
    /// `∫ (∂_j w)^2`.
    pub b4: f64,
    /// `∫ ∂_ii w Z_0`.
    pub b5: f64,
    /// `∫ y_j ∂_j w Z_0`.
    pub b6: f64,
    /// `∫ (D²w[y,y] + N y·∇w + N(N-2)/4 w) Z_0`, the Z_0 projection of the
    /// second dilation derivative that multiplies `μ̇²`.
    pub b7: f64,
    /// Same integrand against `Z_{N+1}`; vanishes.
    pub b8: f64,
    pub d1_magnitude: f64,
    pub d2_magnitude: f64,
    pub a_n: f64,
    pub b_n: f64,
    /// Largest estimated relative quadrature error over all constants.
    pub quad_rel_err: f64,
}

/// Closed forms in terms of `c_N^2 |S^{N-1}| I_N^{N/2}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ClosedForms {
    pub a1: f64,
    pub a2: f64,
    pub b2: f64,
    pub b3: f64,
    pub a_n: f64,
    pub b_n: f64,
    pub b2_over_a2: f64,
}

impl ClosedForms {
    pub fn new(dim: &Dimension) -> Result<Self> {
        let nf = dim.nf();
        let n = dim.n as f64;
        let base = dim.c_n().powi(2) * dim.sphere_area() * ipq(nf, nf / 2.0)?;
        Ok(Self {
            a1: base * (nf - 2.0).powi(4) / (8.0 * nf),
            a2: -base * 4.0 * (nf - 1.0) * (nf - 2.0) / (nf * (nf - 4.0)),
            b2: -base * (nf - 2.0).powi(2) * (nf - 3.0) / (2.0 * nf * (nf - 4.0)),
            b3: base * (nf - 2.0).powi(2) * (nf + 2.0) / (2.0 * nf * (nf - 4.0)),
            a_n: 8.0 * (n - 2.0) / ((n - 3.0) * (n + 1.0)),
            b_n: (n - 3.0).powi(2) * (n - 5.0) / (4.0 * (n + 1.0)),
            b2_over_a2: (nf - 2.0) * (nf - 3.0) / (4.0 * (nf - 1.0)),
        })
    }
}

/// Radial integral of an integrand whose integral cancels; accuracy is
/// judged against `∫|f|`.
fn radial_cancelling<F: Fn(f64) -> f64>(dim: &Dimension, f: F) -> Result<f64> {
    let nf = dim.nf();
    let scale = integrate_half_line(|r| f(r).abs() * r.powf(nf - 1.0), 1e-6, 0.0)?.value;
    let res = integrate_half_line(|r| f(r) * r.powf(nf - 1.0), 0.0, REL_TOL * scale)?;
    Ok(dim.sphere_area() * res.value)
}

fn radial<F: Fn(f64) -> f64>(dim: &Dimension, f: F, worst: &mut f64) -> Result<f64> {
    let nf = dim.nf();
    let res = integrate_half_line(|r| f(r) * r.powf(nf - 1.0), REL_TOL, 0.0)?;
    if res.value != 0.0 {
        *worst = worst.max(res.abs_err / res.value.abs());
    }
    Ok(dim.sphere_area() * res.value)
}

/// `|S^{N-1}| ∫_0^{r_max} f Z_0 r^{N-1}` on the eigenfunction grid, with the
/// Simpson-vs-trapezoid gap as error estimate.
fn against_z0<F: Fn(f64) -> f64>(dim: &Dimension, pair: &EigenPair, f: F, worst: &mut f64) -> f64 {
    let nf = dim.nf();
    let g = &pair.z0;
    let vals: Vec<f64> = g
        .values
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let r = g.node(i);
            f(r) * z * r.powf(nf - 1.0)
        })
        .collect();
    let m = if vals.len() % 2 == 1 { vals.len() } else { vals.len() - 1 };
    let s = simpson(&vals[..m], g.h);
    let s2 = simpson(&vals[..m].iter().step_by(2).copied().collect::<Vec<_>>(), 2.0 * g.h);
    if s != 0.0 {
        // Richardson: the coarse/fine gap over-estimates the fine error by 15x
        *worst = worst.max((s - s2).abs() / 15.0 / s.abs());
    }
    dim.sphere_area() * s
}

pub fn compute_constants_with(dim: &Dimension, pair: &EigenPair) -> Result<BubbleConstants> {
    let nf = dim.nf();
    let p = dim.p;
    let mut worst = 0.0f64;
    let lap = |r: f64| {
        if r == 0.0 {
            nf * w_rr(dim, 0.0)
        } else {
            w_rr(dim, r) + (nf - 1.0) / r * w_r(dim, r)
        }
    };
    let f2 = |r: f64| r * r * w_rr(dim, r) + nf * r * w_r(dim, r) + nf * (nf - 2.0) / 4.0 * w(dim, r);

    let a1 = radial(dim, |r| w(dim, r).powf(p) * ln_w(dim, r) * z_dil(dim, r), &mut worst)?;
    let a1_alt = nf / (p + 1.0).powi(2) * radial(dim, |r| w(dim, r).powf(p + 1.0), &mut worst)?;
    let a2 = radial(dim, |r| w(dim, r) * z_dil(dim, r), &mut worst)?;
    let b1 = radial_cancelling(dim, |r| lap(r) * z_dil(dim, r))? / nf;
    let b2 = radial(dim, |r| r * w_r(dim, r) * z_dil(dim, r), &mut worst)? / nf;
    let b3 = radial(dim, |r| z_dil(dim, r).powi(2), &mut worst)?;
    let b4 = radial(dim, |r| w_r(dim, r).powi(2), &mut worst)? / nf;
    let b8 = radial_cancelling(dim, |r| f2(r) * z_dil(dim, r))?;

    let a3 = against_z0(dim, pair, |r| w(dim, r).powf(p) * ln_w(dim, r), &mut worst);
    let a4 = against_z0(dim, pair, |r| w(dim, r), &mut worst);
    let b5 = against_z0(dim, pair, lap, &mut worst) / nf;
    let b6 = against_z0(dim, pair, |r| r * w_r(dim, r), &mut worst) / nf;
    let b7 = against_z0(dim, pair, f2, &mut worst);

    let k = (nf - 2.0).powi(2) / 16.0;
    if worst > 1e-10 {
        return Err(CoreError::Quadrature { tol: 1e-10, achieved: worst });
    }
    Ok(BubbleConstants {
        dim: *dim,
        lambda1: pair.lambda1,
        a1,
        a1_alt,
        a2,
        a3,
        a4,
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
        b7,
        b8,
        d1_magnitude: k * a1,
        d2_magnitude: k * a3,
        a_n: -a2 / b3,
        b_n: a1 / b3,
        quad_rel_err: worst,
    })
}

pub fn compute_constants(dim: &Dimension) -> Result<(BubbleConstants, EigenPair)> {
    let pair = solve_negative_eigenpair(dim, &GridPolicy::default())?;
    Ok((compute_constants_with(dim, &pair)?, pair))
}

impl BubbleConstants {
    /// Names of the declared sign conditions that fail.
    pub fn sign_violations(&self) -> Vec<&'static str> {
        let mut v = vec![];
        let checks = [
            ("A1 > 0", self.a1 > 0.0),
            ("A2 < 0", self.a2 < 0.0),
            ("B2 < 0", self.b2 < 0.0),
            ("B3 > 0", self.b3 > 0.0),
            ("B4 > 0", self.b4 > 0.0),
            ("a_n > 0", self.a_n > 0.0),
            ("b_n > 0", self.b_n > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                v.push(name);
            }
        }
        v
    }
}

/// JSON record of several dimensions keyed by `n`.
pub fn constants_json(list: &[BubbleConstants]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for c in list {
        map.insert(c.dim.n.to_string(), serde_json::to_value(c).unwrap_or(serde_json::Value::Null));
    }
    serde_json::Value::Object(map)
}
