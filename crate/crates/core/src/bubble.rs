//! The standard bubble `w(y) = c_N (1+|y|^2)^{-(N-2)/2}` and its kernel.

use crate::dim::Dimension;
use crate::error::{CoreError, Result};

/// Radial profile `w(r)`.
pub fn w(dim: &Dimension, r: f64) -> f64 {
    dim.c_n() * (1.0 + r * r).powf(-dim.weight())
}

/// `w'(r)`.
pub fn w_r(dim: &Dimension, r: f64) -> f64 {
    let nf = dim.nf();
    -(nf - 2.0) * dim.c_n() * r * (1.0 + r * r).powf(-nf / 2.0)
}

/// `w''(r)`.
pub fn w_rr(dim: &Dimension, r: f64) -> f64 {
    let nf = dim.nf();
    let s = 1.0 + r * r;
    -(nf - 2.0) * dim.c_n() * s.powf(-nf / 2.0 - 1.0) * (s - nf * r * r)
}

pub fn ln_w(dim: &Dimension, r: f64) -> f64 {
    dim.c_n().ln() - dim.weight() * (r * r).ln_1p()
}

/// Radial dilation kernel `Z_{N+1} = r w' + (N-2)/2 w`.
pub fn z_dil(dim: &Dimension, r: f64) -> f64 {
    let nf = dim.nf();
    dim.c_n() * dim.weight() * (1.0 - r * r) * (1.0 + r * r).powf(-nf / 2.0)
}

/// `d/dr Z_{N+1}`.
pub fn z_dil_r(dim: &Dimension, r: f64) -> f64 {
    let nf = dim.nf();
    let s = 1.0 + r * r;
    dim.c_n() * dim.weight() * r * s.powf(-nf / 2.0 - 1.0) * (-2.0 * s - nf * (1.0 - r * r))
}

/// Linearized potential `p w^{p-1} = N(N+2)/(1+r^2)^2`.
pub fn potential(dim: &Dimension, r: f64) -> f64 {
    let nf = dim.nf();
    let s = 1.0 + r * r;
    nf * (nf + 2.0) / (s * s)
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn eval_bubble(dim: &Dimension, y: &[f64]) -> f64 {
    debug_assert_eq!(y.len(), dim.big_n);
    w(dim, norm(y))
}

/// `Z_j = ∂_j w` for `j ≤ N`, `Z_{N+1} = y·∇w + (N-2)/2 w`.
pub fn eval_kernel(dim: &Dimension, j: usize, y: &[f64]) -> Result<f64> {
    let big_n = dim.big_n;
    if j == 0 || j > big_n + 1 {
        return Err(CoreError::KernelIndex { j, max: big_n + 1 });
    }
    let r = norm(y);
    if j == big_n + 1 {
        return Ok(z_dil(dim, r));
    }
    let nf = dim.nf();
    Ok(-(nf - 2.0) * dim.c_n() * y[j - 1] * (1.0 + r * r).powf(-nf / 2.0))
}
