//! Linear periodic solvers for the reduced system and the resonance gap.

use filament_core::floquet::{monodromy_extrapolated, FloquetReport};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{OdeError, Result};
use crate::periodic::{stencil_matrix, PeriodicFunction, TrigInterp, VectorPeriodic, D2};
use crate::singular::{golden_minimum, scalar_monodromy};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearSolution {
    pub value: PeriodicFunction,
    /// Max-norm collocation residual.
    pub residual: f64,
    /// Observed constant in the a-priori bound (see each solver).
    pub amplification: f64,
}

/// `−μ̈ + q μ = f`, periodic. `amplification = (‖μ‖∞ + ‖μ̇‖∞) / ‖f‖∞`.
pub fn solve_l_n1(q: &PeriodicFunction, f: &PeriodicFunction) -> Result<LinearSolution> {
    q.same_grid(f)?;
    let rep = FloquetReport::from_monodromy(&scalar_monodromy(q));
    if rep.degenerate {
        return Err(OdeError::Degenerate { distance: rep.distance_to_one });
    }
    let m = q.len();
    let mut a = -stencil_matrix(m, q.spacing(), 1.0, 0.0);
    for i in 0..m {
        a[(i, i)] += q.values[i];
    }
    let rhs = DVector::from_vec(f.values.clone());
    let sol = a.clone().lu().solve(&rhs).ok_or(OdeError::Degenerate { distance: 0.0 })?;
    let residual = (&a * &sol - &rhs).amax();
    let value = PeriodicFunction::new(q.period, sol.iter().copied().collect());
    let amplification = (value.sup() + value.d1().sup()) / f.sup().max(f64::MIN_POSITIVE);
    Ok(LinearSolution { value, residual, amplification })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSolution {
    pub value: VectorPeriodic,
    pub residual: f64,
    pub floquet: FloquetReport,
}

/// `−d̈ + P d = f` with `d(t + 2ℓ) = T d(t)` where `T = f.twist`, and
/// `P(t)` the sampled matrix `R_{0j0k}`.
pub fn solve_l_k(curv: &[DMatrix<f64>], f: &VectorPeriodic) -> Result<VectorSolution> {
    let m = f.len();
    let k = f.width();
    if curv.len() != m || curv.iter().any(|p| p.nrows() != k || p.ncols() != k) {
        return Err(OdeError::Shape(format!("{} curvature samples for {m} nodes of width {k}", curv.len())));
    }
    let tw = &f.twist;
    let tw_inv = tw.clone().try_inverse().ok_or_else(|| OdeError::Shape("singular twist".into()))?;

    // twisted monodromy of d̈ = P d with entrywise trigonometric interpolation
    let interps: Vec<TrigInterp> = (0..k * k)
        .map(|e| PeriodicFunction::new(f.period, curv.iter().map(|p| p[(e / k, e % k)]).collect()).interpolant())
        .collect();
    let mono = monodromy_extrapolated(|t| DMatrix::from_fn(k, k, |r, c| interps[r * k + c].eval(t)), k, f.period, 4 * m);
    let mut untwist = DMatrix::zeros(2 * k, 2 * k);
    untwist.view_mut((0, 0), (k, k)).copy_from(&tw_inv);
    untwist.view_mut((k, k), (k, k)).copy_from(&tw_inv);
    let floquet = FloquetReport::from_monodromy(&(untwist * mono));
    if floquet.degenerate {
        return Err(OdeError::Degenerate { distance: floquet.distance_to_one });
    }

    let h = f.spacing();
    let size = m * k;
    let mut a = DMatrix::zeros(size, size);
    let place = |a: &mut DMatrix<f64>, row: usize, j: isize, w: f64| {
        let mi = m as isize;
        let wraps = j.div_euclid(mi);
        let col = j.rem_euclid(mi) as usize;
        let block = match wraps {
            0 => DMatrix::identity(k, k),
            1 => tw.clone(),
            -1 => tw_inv.clone(),
            _ => unreachable!("stencil reaches one period at most"),
        };
        let mut v = a.view_mut((row * k, col * k), (k, k));
        v += block * w;
    };
    for i in 0..m {
        let ii = i as isize;
        place(&mut a, i, ii, -D2[0] / (h * h));
        for o in 1..=3isize {
            place(&mut a, i, ii + o, -D2[o as usize] / (h * h));
            place(&mut a, i, ii - o, -D2[o as usize] / (h * h));
        }
        let mut v = a.view_mut((i * k, i * k), (k, k));
        v += &curv[i];
    }
    let mut rhs = DVector::zeros(size);
    for i in 0..m {
        rhs.rows_mut(i * k, k).copy_from(&f.values[i]);
    }
    let sol = a.clone().lu().solve(&rhs).ok_or(OdeError::Degenerate { distance: 0.0 })?;
    let residual = (&a * &sol - &rhs).amax();
    let values = (0..m).map(|i| sol.rows(i * k, k).into_owned()).collect();
    Ok(VectorSolution { value: VectorPeriodic { period: f.period, values, twist: tw.clone() }, residual, floquet })
}

/// A value of ε at which `ε a_0 ë + λ_1 e = 0` has a periodic solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    /// Mode number: the solution has about `2m` sign changes per period.
    pub m: usize,
    /// From the Fourier-Galerkin eigenproblem `−ë = Λ (λ_1/a_0) e`, `ε = 1/Λ`.
    pub eps_galerkin: f64,
    /// Minimizer of the monodromy distance from 1 near the Galerkin value.
    pub eps: f64,
}

/// Distance from 1 of the monodromy spectrum of `ε a_0 ë + λ_1 e = 0` as a
/// function of ε near `eps_ref`, with the coefficient tabulated once.
fn l0_distance(interp: &TrigInterp, period: f64, lam1: f64, eps_ref: f64, amin: f64, m: usize) -> impl Fn(f64) -> f64 {
    let omega = (lam1 / (eps_ref * amin)).sqrt();
    let steps = ((20.0 * omega * period) as usize).max(4 * m);
    // the fine pass of the extrapolation samples at a quarter of the coarse step
    let dt = period / (4 * steps) as f64;
    let w: Vec<f64> = (0..=4 * steps).map(|i| lam1 / interp.eval(i as f64 * dt)).collect();
    move |eps: f64| {
        let coef = |t: f64| DMatrix::from_element(1, 1, -w[(t / dt).round() as usize] / eps);
        let mono = monodromy_extrapolated(coef, 1, period, steps);
        FloquetReport::from_monodromy(&mono).distance_to_one
    }
}

/// Resonant ε with `ε ≥ eps_min`, in decreasing order of ε.
pub fn l0_resonances(a0: &PeriodicFunction, lam1: f64, eps_min: f64) -> Vec<Resonance> {
    let period = a0.period;
    let w0 = 2.0 * PI / period;
    let amin = a0.min();
    let m_max = ((lam1 / (eps_min * amin)).sqrt() / w0).ceil() as usize + 2;
    let kk = 2 * m_max + 16;
    let dim = 2 * kk + 1;
    let interp = a0.interpolant();
    let q = 4 * kk + 8;
    let nodes: Vec<f64> = (0..q).map(|i| period * i as f64 / q as f64).collect();
    let weight: Vec<f64> = nodes.iter().map(|t| lam1 / interp.eval(*t)).collect();
    let basis = |j: usize, t: f64| -> f64 {
        if j == 0 {
            1.0
        } else {
            let k = j.div_ceil(2) as f64;
            if j % 2 == 1 {
                (k * w0 * t).cos()
            } else {
                (k * w0 * t).sin()
            }
        }
    };
    let phi: Vec<Vec<f64>> = (0..dim).map(|j| nodes.iter().map(|t| basis(j, *t)).collect()).collect();
    let mut wm = DMatrix::zeros(dim, dim);
    let mut km = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let s: f64 = (0..q).map(|p| weight[p] * phi[i][p] * phi[j][p]).sum::<f64>() * period / q as f64;
            wm[(i, j)] = s;
            wm[(j, i)] = s;
        }
        let k = i.div_ceil(2) as f64;
        let norm = if i == 0 { period } else { period / 2.0 };
        km[(i, i)] = (k * w0).powi(2) * norm;
    }
    let chol = wm.cholesky().expect("weight matrix positive definite");
    let l_inv = chol.l().try_inverse().expect("triangular factor invertible");
    let c = &l_inv * km * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut lams: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    lams.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::new();
    for (j, lam) in lams.iter().enumerate().skip(1) {
        let m = j.div_ceil(2);
        if m > m_max || *lam <= 0.0 {
            break;
        }
        let eg = 1.0 / lam;
        if eg < eps_min {
            break;
        }
        let delta = 1e-4 * eg;
        let eps = golden_minimum(l0_distance(&interp, period, lam1, eg, amin, a0.len()), eg - delta, eg + delta, 1e-13 * eg);
        out.push(Resonance { m, eps_galerkin: eg, eps });
    }
    out
}

/// `ε a_0 ë + λ_1 e = f`, periodic. Refuses with `NearResonance` when
/// `|ε − ε_m| m² ≤ ν √ε` for a resonance `ε_m`. `amplification` is the
/// observed `C` in `ε‖ë‖ + √ε‖ė‖ + ‖e‖ ≤ C ε^{−1/2} ‖f‖`.
pub fn solve_l_0(a0: &PeriodicFunction, f: &PeriodicFunction, eps: f64, lam1: f64, nu: f64) -> Result<LinearSolution> {
    a0.same_grid(f)?;
    if a0.min() <= 0.0 {
        return Err(OdeError::Shape("a0 must be positive".into()));
    }
    for r in l0_resonances(a0, lam1, 0.5 * eps) {
        if (eps - r.eps).abs() * (r.m * r.m) as f64 <= nu * eps.sqrt() {
            return Err(OdeError::NearResonance { eps, resonance: r.eps, m: r.m });
        }
    }
    let m = a0.len();
    let d2 = stencil_matrix(m, a0.spacing(), 1.0, 0.0);
    let mut a = DMatrix::from_fn(m, m, |i, j| eps * a0.values[i] * d2[(i, j)]);
    for i in 0..m {
        a[(i, i)] += lam1;
    }
    let rhs = DVector::from_vec(f.values.clone());
    let sol = a.clone().lu().solve(&rhs).ok_or(OdeError::Degenerate { distance: 0.0 })?;
    let residual = (&a * &sol - &rhs).amax();
    let value = PeriodicFunction::new(a0.period, sol.iter().copied().collect());
    let lhs = eps * value.d2().sup() + eps.sqrt() * value.d1().sup() + value.sup();
    let amplification = lhs * eps.sqrt() / f.sup().max(f64::MIN_POSITIVE);
    Ok(LinearSolution { value, residual, amplification })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    pub eps: f64,
    pub kappa: f64,
    pub nu: f64,
    /// `k ≥ 1` with `|ε k² − κ²| ≤ ν √ε`.
    pub violating: Vec<usize>,
    pub holds: bool,
    /// Monodromy-derived resonances with `ε_m ≥ ε/2`.
    pub resonances: Vec<Resonance>,
    /// Whether ε is within the gap tolerance of one of `resonances`.
    pub near_monodromy_resonance: bool,
}

/// `κ = (π/2) √λ_1 ∫ a_0^{−1/2}` over one period.
pub fn kappa(a0: &PeriodicFunction, lam1: f64) -> f64 {
    let integral: f64 = a0.values.iter().map(|a| a.powf(-0.5)).sum::<f64>() * a0.spacing();
    0.5 * PI * lam1.sqrt() * integral
}

pub fn gap_check(eps: f64, a0: &PeriodicFunction, lam1: f64, nu: f64) -> GapReport {
    let kappa = kappa(a0, lam1);
    let center = kappa / eps.sqrt();
    let span = (nu / eps.sqrt()).max(1.0) + 2.0;
    let lo = (center - span).floor().max(1.0) as usize;
    let hi = (center + span).ceil() as usize;
    let violating: Vec<usize> = (lo..=hi)
        .filter(|k| (eps * (k * k) as f64 - kappa * kappa).abs() <= nu * eps.sqrt())
        .collect();
    let resonances = l0_resonances(a0, lam1, 0.5 * eps);
    let near_monodromy_resonance =
        resonances.iter().any(|r| (eps - r.eps).abs() * (r.m * r.m) as f64 <= nu * eps.sqrt());
    GapReport { eps, kappa, nu, holds: violating.is_empty(), violating, resonances, near_monodromy_resonance }
}
