//! Positive eigenvalue of the radial linearization around the bubble.
//!
//! We solve `ΔZ + p w^{p-1} Z = λ Z` with `λ > 0`. Seen from the operator
//! `L_0 = Δ + p w^{p-1}`, this `λ` is its single positive eigenvalue; written
//! for `-L_0` it is the one negative eigenvalue `-λ`. Both phrasings describe
//! the same pair.

use serde::{Deserialize, Serialize};

use crate::bubble::potential;
use crate::dim::Dimension;
use crate::error::{CoreError, Result};
use crate::numerics::{brent, fit_slope, rk4_step, simpson};
use crate::radial::RadialGrid;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridPolicy {
    /// RK4 step, also the sample spacing of the returned profile.
    pub h: f64,
    pub r_max: f64,
    pub r_match: f64,
    /// Number of trial eigenvalues in the initial scan below `V(0)`.
    pub scan: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { h: 1e-3, r_max: 20.0, r_match: 1.5, scan: 400 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda1: f64,
    pub z0: RadialGrid,
    /// Weighted L² norm of `ΔZ + VZ - λZ` with `Z''` differentiated from the
    /// sampled `Z'`.
    pub residual: f64,
    pub normalization_error: f64,
    /// Slope of `-ln(Z r^{(N-1)/2})` fitted on the far field.
    pub measured_decay: f64,
}

fn rhs(dim: &Dimension, lambda: f64) -> impl Fn(f64, &[f64]) -> Vec<f64> + '_ {
    let nf = dim.nf();
    move |r, y| vec![y[1], -(nf - 1.0) / r * y[1] + (lambda - potential(dim, r)) * y[0]]
}

/// Series start `Z = 1 + a r² + b r⁴` at `r = h`.
fn series_start(dim: &Dimension, lambda: f64, r: f64) -> [f64; 2] {
    let nf = dim.nf();
    let v0 = potential(dim, 0.0);
    let a = (lambda - v0) / (2.0 * nf);
    let b = ((lambda - v0) * a + 2.0 * v0) / (4.0 * (nf + 2.0));
    [1.0 + a * r * r + b * r.powi(4), 2.0 * a * r + 4.0 * b * r.powi(3)]
}

struct Sweep {
    outward: Vec<[f64; 2]>,
    inward: Vec<[f64; 2]>,
}

fn sweep(dim: &Dimension, lambda: f64, pol: &GridPolicy) -> Sweep {
    let f = rhs(dim, lambda);
    let m = (pol.r_match / pol.h).round() as usize;
    let total = (pol.r_max / pol.h).round() as usize;
    let nf = dim.nf();
    let mut outward = Vec::with_capacity(m + 1);
    outward.push([1.0, 0.0]);
    let s = series_start(dim, lambda, pol.h);
    outward.push(s);
    let mut y = s.to_vec();
    for i in 1..m {
        y = rk4_step(&f, i as f64 * pol.h, &y, pol.h);
        outward.push([y[0], y[1]]);
    }
    let k = lambda.max(0.0).sqrt();
    let rf = pol.r_max;
    let mut y = vec![1.0, -(k + (nf - 1.0) / (2.0 * rf))];
    let mut inward = vec![[y[0], y[1]]];
    for i in (m..total).rev() {
        y = rk4_step(&f, (i + 1) as f64 * pol.h, &y, -pol.h);
        inward.push([y[0], y[1]]);
        // keep magnitudes tame; only ratios matter during matching
        let s = y[0].abs().max(y[1].abs());
        if s > 1e100 {
            for v in inward.iter_mut() {
                v[0] /= s;
                v[1] /= s;
            }
            y[0] /= s;
            y[1] /= s;
        }
    }
    inward.reverse();
    Sweep { outward, inward }
}

/// Normalized Wronskian of the two sweeps at the matching radius.
fn mismatch(sw: &Sweep) -> f64 {
    let a = sw.outward.last().unwrap();
    let b = sw.inward.first().unwrap();
    let na = (a[0] * a[0] + a[1] * a[1]).sqrt();
    let nb = (b[0] * b[0] + b[1] * b[1]).sqrt();
    (a[1] * b[0] - b[1] * a[0]) / (na * nb)
}

pub fn solve_negative_eigenpair(dim: &Dimension, pol: &GridPolicy) -> Result<EigenPair> {
    let v0 = potential(dim, 0.0);
    let g = |l: f64| mismatch(&sweep(dim, l, pol));
    // the nodeless state has the largest eigenvalue: scan downward from V(0)
    let mut hi = v0 * (1.0 - 1e-6);
    let mut g_hi = g(hi);
    let mut bracket = None;
    for j in (1..pol.scan).rev() {
        let lo = v0 * j as f64 / pol.scan as f64;
        let g_lo = g(lo);
        if g_lo.signum() != g_hi.signum() {
            bracket = Some((lo, hi));
            break;
        }
        hi = lo;
        g_hi = g_lo;
    }
    let (lo, hi) = bracket.ok_or(CoreError::Bracket { lo: 0.0, hi: v0 })?;
    let lambda = brent(g, lo, hi, 1e-14, 200)?;
    let sw = sweep(dim, lambda, pol);
    let mm = mismatch(&sw);
    if mm.abs() > 1e-8 {
        return Err(CoreError::NoConvergence { iters: 200, mismatch: mm });
    }
    assemble(dim, lambda, sw, pol)
}

fn assemble(dim: &Dimension, lambda: f64, sw: Sweep, pol: &GridPolicy) -> Result<EigenPair> {
    let nf = dim.nf();
    let omega = dim.sphere_area();
    let a = *sw.outward.last().unwrap();
    let b = sw.inward[0];
    let scale = a[0] / b[0];
    let mut z: Vec<f64> = sw.outward.iter().map(|v| v[0]).collect();
    let mut dz: Vec<f64> = sw.outward.iter().map(|v| v[1]).collect();
    for v in sw.inward.iter().skip(1) {
        z.push(v[0] * scale);
        dz.push(v[1] * scale);
    }
    let h = pol.h;
    let weighted: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(i, v)| v * v * (i as f64 * h).powf(nf - 1.0))
        .collect();
    let norm2 = omega * simpson(&weighted, h);
    let sgn = if z[0] < 0.0 { -1.0 } else { 1.0 };
    let c = sgn / norm2.sqrt();
    for v in z.iter_mut() {
        *v *= c;
    }
    for v in dz.iter_mut() {
        *v *= c;
    }
    let weighted: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(i, v)| v * v * (i as f64 * h).powf(nf - 1.0))
        .collect();
    let normalization_error = (omega * simpson(&weighted, h) - 1.0).abs();

    // Z'' from a fourth-order difference of the sampled Z'
    let n = z.len();
    let mut res2 = vec![0.0; n];
    for i in 2..n - 2 {
        let r = i as f64 * h;
        let d2 = (dz[i - 2] - 8.0 * dz[i - 1] + 8.0 * dz[i + 1] - dz[i + 2]) / (12.0 * h);
        let res = d2 + (nf - 1.0) / r * dz[i] + (potential(dim, r) - lambda) * z[i];
        res2[i] = res * res * r.powf(nf - 1.0);
    }
    let m = if (n - 1) % 2 == 0 { n } else { n - 1 };
    let residual = (omega * simpson(&res2[..m], h)).sqrt();

    let k = lambda.sqrt();
    let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n)
        .filter(|&i| {
            let r = i as f64 * h;
            (6.0..=10.0).contains(&r)
        })
        .map(|i| {
            let r = i as f64 * h;
            (r, (z[i] * r.powf((nf - 1.0) / 2.0)).ln())
        })
        .unzip();
    let measured_decay = -fit_slope(&xs, &ys).0;

    if z.iter().any(|v| *v <= 0.0) {
        return Err(CoreError::NoConvergence { iters: 0, mismatch: f64::NAN });
    }
    Ok(EigenPair {
        lambda1: lambda,
        z0: RadialGrid { h, values: z, derivs: dz, decay_rate: k, decay_power: (nf - 1.0) / 2.0 },
        residual,
        normalization_error,
        measured_decay,
    })
}
