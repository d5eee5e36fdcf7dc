//! Stratified Monte-Carlo projections `∫_{D} S_ε(y) Z_j(y) dy` over a slice.
//!
//! Radii are drawn from the density `∝ r^{N−1}(1+r)^{−(2N−4)}`, which
//! tracks the decay of `S_ε Z_j`. The radial CDF is split into equal strata;
//! each stratum gets two independent replicates, and each replicate samples
//! the `2N` points `±r Q e_j` of a Haar-rotated cross-polytope. Odd
//! integrands and quadratic angular dependence are integrated exactly on a
//! replicate; the replicate pair gives the variance estimate.
//!
//! Every stratum owns its RNG stream, so results do not depend on the
//! thread count.

use filament_core::bubble::{eval_kernel, z_dil};
use filament_core::Dimension;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AnsatzError, Result};
use crate::field::{AnsatzField, FieldSlice};

pub const MIN_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    /// Negative eigenfunction `Z_0`.
    Z0,
    /// `Z_k = ∂_k w`, `1 ≤ k ≤ N`.
    Translation(usize),
    /// `Z_{N+1}`.
    Dilation,
}

impl Channel {
    /// Index `j` in `0..=N+1`.
    pub fn from_index(j: usize, big_n: usize) -> Result<Self> {
        match j {
            0 => Ok(Channel::Z0),
            j if j <= big_n => Ok(Channel::Translation(j)),
            j if j == big_n + 1 => Ok(Channel::Dilation),
            _ => Err(AnsatzError::Input(format!("channel {j} outside 0..={}", big_n + 1))),
        }
    }

    pub fn index(&self, big_n: usize) -> usize {
        match *self {
            Channel::Z0 => 0,
            Channel::Translation(k) => k,
            Channel::Dilation => big_n + 1,
        }
    }

    pub fn label(&self, big_n: usize) -> String {
        format!("Z{}", self.index(big_n))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimate {
    pub channel: String,
    pub estimate: f64,
    pub stderr: f64,
    /// Residual evaluations spent.
    pub samples: usize,
}

/// Inverse-CDF sampler for `r ∈ [0, r_max]`, using `t = r/(1+r)` in which
/// the density becomes `t^{N−1}(1−t)^{N−5}`.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    big_n: usize,
    coeffs: Vec<f64>,
    t_max: f64,
    f_max: f64,
    sphere: f64,
}

impl RadialSampler {
    pub fn new(dim: &Dimension, r_max: f64) -> Result<Self> {
        let big_n = dim.big_n;
        if big_n < 5 || !(r_max > 0.0) {
            return Err(AnsatzError::Input(format!("radial sampler with N = {big_n}, r_max = {r_max}")));
        }
        let m = big_n - 5;
        let mut binom = 1.0;
        let mut coeffs = Vec::with_capacity(m + 1);
        for j in 0..=m {
            if j > 0 {
                binom *= (m + 1 - j) as f64 / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(sign * binom / (big_n + j) as f64);
        }
        let t_max = r_max / (1.0 + r_max);
        let mut s = Self { big_n, coeffs, t_max, f_max: 0.0, sphere: dim.sphere_area() };
        s.f_max = s.cdf(t_max);
        Ok(s)
    }

    /// Unnormalized CDF in `t`.
    pub fn cdf(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        let mut tp = t.powi(self.big_n as i32);
        for c in &self.coeffs {
            acc += c * tp;
            tp *= t;
        }
        acc
    }

    /// Radius at CDF fraction `u ∈ [0, 1]`.
    pub fn radius(&self, u: f64) -> f64 {
        let target = u * self.f_max;
        let (mut lo, mut hi) = (0.0, self.t_max);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        t / (1.0 - t)
    }

    /// Inverse of the sampling density in `R^N` at radius `r`.
    pub fn weight(&self, r: f64) -> f64 {
        self.sphere * self.f_max * (1.0 + r).powi(2 * self.big_n as i32 - 4)
    }
}

fn haar_rotation(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn kernel(slice: &FieldSlice<'_>, ch: Channel, y: &[f64], r: f64) -> f64 {
    let f = slice.field;
    match ch {
        Channel::Z0 => f.z0.eval(r),
        Channel::Dilation => z_dil(&f.dim, r),
        Channel::Translation(k) => eval_kernel(&f.dim, k, y).expect("validated channel"),
    }
}

/// One replicate: the weighted cross-polytope mean of `S Z_c` per channel.
fn replicate(
    slice: &FieldSlice<'_>,
    sampler: &RadialSampler,
    channels: &[Channel],
    rng: &mut ChaCha8Rng,
    stratum: usize,
    strata: usize,
) -> Result<Vec<f64>> {
    let n = sampler.big_n;
    let u = (stratum as f64 + rng.random::<f64>()) / strata as f64;
    let r = sampler.radius(u);
    let q = haar_rotation(rng, n);
    let mut acc = vec![0.0; channels.len()];
    let mut y = vec![0.0; n];
    for j in 0..n {
        for sign in [1.0, -1.0] {
            for (k, yk) in y.iter_mut().enumerate() {
                *yk = sign * r * q[(k, j)];
            }
            let s = slice.residual(&y)?;
            for (a, &ch) in acc.iter_mut().zip(channels) {
                *a += s * kernel(slice, ch, &y, r);
            }
        }
    }
    let scale = sampler.weight(r) / (2 * n) as f64;
    Ok(acc.into_iter().map(|a| a * scale).collect())
}

/// Projections of the slice residual on several channels from one shared
/// set of samples. `budget` counts residual evaluations.
pub fn project_channels(slice: &FieldSlice<'_>, channels: &[Channel], budget: usize, seed: u64) -> Result<Vec<Estimate>> {
    let dim = &slice.field.dim;
    let n = dim.big_n;
    if budget < MIN_BUDGET {
        return Err(AnsatzError::Budget(budget));
    }
    for ch in channels {
        Channel::from_index(ch.index(n), n)?;
    }
    let sampler = RadialSampler::new(dim, slice.radius)?;
    let strata = budget / (2 * 2 * n);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..strata)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s as u64);
            let a = replicate(slice, &sampler, channels, &mut rng, s, strata)?;
            let b = replicate(slice, &sampler, channels, &mut rng, s, strata)?;
            Ok((a, b))
        })
        .collect::<Result<_>>()?;
    let m = channels.len();
    let (mut sum, mut var) = (vec![0.0; m], vec![0.0; m]);
    for (a, b) in &pairs {
        for c in 0..m {
            sum[c] += 0.5 * (a[c] + b[c]);
            let d = a[c] - b[c];
            var[c] += 0.25 * d * d;
        }
    }
    let sf = strata as f64;
    Ok(channels
        .iter()
        .enumerate()
        .map(|(c, ch)| Estimate {
            channel: ch.label(n),
            estimate: sum[c] / sf,
            stderr: var[c].sqrt() / sf,
            samples: strata * 4 * n,
        })
        .collect())
}

/// `∫_{D_{y_0}} S_ε Z_j dy` at `x_0 = √ε y_0`. Fails when `tol` is given and
/// the standard error exceeds it.
pub fn project_residual(
    field: &AnsatzField,
    j: usize,
    y0: f64,
    budget: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<Estimate> {
    let ch = Channel::from_index(j, field.dim.big_n)?;
    let slice = field.slice(field.eps().sqrt() * y0)?;
    let est = project_channels(&slice, &[ch], budget, seed)?.remove(0);
    if let Some(tol) = tol {
        if est.stderr > tol {
            return Err(AnsatzError::Tolerance { stderr: est.stderr, tol });
        }
    }
    Ok(est)
}
