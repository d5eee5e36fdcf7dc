//! Finite-difference self-test of the kernel functions `Z_1 .. Z_{N+1}`.

use crate::bubble::{potential, w_r, z_dil};
use crate::dim::Dimension;
use crate::error::{CoreError, Result};
use crate::numerics::simpson;

/// Design order of the radial stencil used below.
pub const KERNEL_FD_ORDER: f64 = 4.0;

/// Relative weighted residual `‖ΔZ_j + p w^{p-1} Z_j‖ / ‖p w^{p-1} Z_j‖` in
/// `L²(B_R)`, with the Laplacian taken by fourth-order differences of the
/// radial profile sampled at spacing `h`.
///
/// `Z_{N+1}` is radial (even extension across `r = 0`); `Z_j = w'(r) y_j/r`
/// for `j ≤ N` carries the `l = 1` harmonic, so its profile is odd.
pub fn kernel_residual(dim: &Dimension, j: usize, h: f64) -> Result<f64> {
    let big_n = dim.big_n;
    if j == 0 || j > big_n + 1 {
        return Err(CoreError::KernelIndex { j, max: big_n + 1 });
    }
    let nf = dim.nf();
    let radius = 10.0;
    let m = (radius / h).round() as usize;
    let (prof, l): (Box<dyn Fn(f64) -> f64>, f64) = if j == big_n + 1 {
        (Box::new(|r| z_dil(dim, r)), 0.0)
    } else {
        (Box::new(|r| w_r(dim, r)), 1.0)
    };
    // symmetric extension through the origin
    let sign = if l == 0.0 { 1.0 } else { -1.0 };
    let f = |i: i64| {
        let r = i as f64 * h;
        if i < 0 { sign * prof(-r) } else { prof(r) }
    };
    let mut num = vec![0.0; m + 1];
    let mut den = vec![0.0; m + 1];
    for i in 1..=m as i64 {
        let r = i as f64 * h;
        let (fm2, fm1, f0, fp1, fp2) = (f(i - 2), f(i - 1), f(i), f(i + 1), f(i + 2));
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let lap = d2 + (nf - 1.0) / r * d1 - l * (nf + l - 2.0) / (r * r) * f0;
        let v = potential(dim, r) * f0;
        let wgt = r.powf(nf - 1.0);
        num[i as usize] = (lap + v).powi(2) * wgt;
        den[i as usize] = v * v * wgt;
    }
    let m_odd = if m % 2 == 0 { m + 1 } else { m };
    Ok((simpson(&num[..m_odd], h) / simpson(&den[..m_odd], h)).sqrt())
}

/// Residuals at `h` and `h/2` with the observed order `log2(r_h / r_{h/2})`.
pub fn kernel_residual_order(dim: &Dimension, j: usize, h: f64) -> Result<(f64, f64, f64)> {
    let a = kernel_residual(dim, j, h)?;
    let b = kernel_residual(dim, j, h / 2.0)?;
    Ok((a, b, (a / b).log2()))
}
