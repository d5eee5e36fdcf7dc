//! Parallel orthonormal normal frames and holonomy.

use filament_core::numerics::rk4_step;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::geodesic::{gamma_contract, spray, ClosedGeodesic};
use crate::model::ManifoldModel;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalFrame {
    /// `vectors[s][i]` is `E_{i+1}` at sample `s` in chart components.
    pub vectors: Vec<Vec<DVector<f64>>>,
    /// `a_ji = g(E_i(2ℓ), E_j(0))`.
    pub holonomy: DMatrix<f64>,
    pub orthonormality_error: f64,
    pub transport_residual: f64,
    pub holonomy_relation_error: f64,
}

impl NormalFrame {
    /// `(E_0 = γ̇, E_1, …, E_N)` at sample `s`.
    pub fn full_frame(&self, geo: &ClosedGeodesic, s: usize) -> Vec<DVector<f64>> {
        let mut f = vec![DVector::from_column_slice(&geo.velocities[s])];
        f.extend(self.vectors[s].iter().cloned());
        f
    }

    /// Twist acting on frame components of a parallel-periodic field:
    /// components at `2ℓ` equal `Aᵀ` times components at `0`.
    pub fn component_twist(&self) -> DMatrix<f64> {
        self.holonomy.transpose()
    }
}

fn inner(g: &DMatrix<f64>, u: &DVector<f64>, w: &DVector<f64>) -> f64 {
    (u.transpose() * g * w)[(0, 0)]
}

/// Orthonormal complement of `v` by Gram-Schmidt on the coordinate basis,
/// skipping the basis vector most aligned with `v`.
pub fn initial_normal_basis(model: &ManifoldModel, x: &[f64], v: &[f64]) -> Vec<DVector<f64>> {
    let n = model.dim();
    let g = model.metric(x);
    let v = DVector::from_column_slice(v);
    let skip = (0..n).max_by(|a, b| v[*a].abs().total_cmp(&v[*b].abs())).unwrap();
    let mut basis: Vec<DVector<f64>> = vec![v.clone() / inner(&g, &v, &v).sqrt()];
    for k in (0..n).filter(|k| *k != skip) {
        let mut e = DVector::zeros(n);
        e[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&g, &e, b);
                e -= b * c;
            }
        }
        let nn = inner(&g, &e, &e).sqrt();
        basis.push(e / nn);
    }
    basis.remove(0);
    basis
}

fn transport_rhs(model: &ManifoldModel, y: &[f64], count: usize) -> Vec<f64> {
    let n = model.dim();
    let mut out = spray(model, &y[..2 * n]);
    let (x, v) = (&y[..n], &y[n..2 * n]);
    for i in 0..count {
        let e = &y[2 * n + i * n..2 * n + (i + 1) * n];
        out.extend(gamma_contract(model, x, v, e).iter().map(|a| -a));
    }
    out
}

/// Transport `start` (chart components) along the orbit through `(x, v)`
/// for time `period`, storing `samples` snapshots.
fn transport(
    model: &ManifoldModel,
    x: &[f64],
    v: &[f64],
    start: &[DVector<f64>],
    period: f64,
    samples: usize,
    substeps: usize,
) -> Vec<Vec<DVector<f64>>> {
    let n = model.dim();
    let mut y: Vec<f64> = x.iter().chain(v).copied().collect();
    for e in start {
        y.extend(e.iter());
    }
    let h = period / (samples * substeps) as f64;
    let unpack = |y: &[f64]| -> Vec<DVector<f64>> {
        (0..start.len()).map(|i| DVector::from_column_slice(&y[2 * n + i * n..2 * n + (i + 1) * n])).collect()
    };
    let mut out = Vec::with_capacity(samples + 1);
    for s in 0..samples {
        out.push(unpack(&y));
        for k in 0..substeps {
            let t = ((s * substeps) + k) as f64 * h;
            y = rk4_step(&|_, z: &[f64]| transport_rhs(model, z, start.len()), t, &y, h);
        }
    }
    out.push(unpack(&y));
    out
}

fn holonomy_of(g0: &DMatrix<f64>, first: &[DVector<f64>], last: &[DVector<f64>]) -> (DMatrix<f64>, f64) {
    let nn = first.len();
    let a = DMatrix::from_fn(nn, nn, |j, i| inner(g0, &last[i], &first[j]));
    let mut err: f64 = 0.0;
    for i in 0..nn {
        let mut r = last[i].clone();
        for j in 0..nn {
            r -= &first[j] * a[(j, i)];
        }
        err = err.max(inner(g0, &r, &r).sqrt());
    }
    (a, err)
}

pub fn parallel_frame(model: &ManifoldModel, geo: &ClosedGeodesic) -> Result<NormalFrame> {
    let start = initial_normal_basis(model, &geo.positions[0], &geo.velocities[0]);
    parallel_frame_from(model, geo, &start)
}

pub fn parallel_frame_from(
    model: &ManifoldModel,
    geo: &ClosedGeodesic,
    start: &[DVector<f64>],
) -> Result<NormalFrame> {
    let m = geo.samples();
    let mut vectors = transport(
        model,
        &geo.positions[0],
        &geo.velocities[0],
        start,
        geo.period,
        m,
        geo.substeps,
    );
    let last = vectors.pop().unwrap();
    let g0 = model.metric(&geo.positions[0]);
    let (holonomy, holonomy_relation_error) = holonomy_of(&g0, &vectors[0], &last);

    let mut orthonormality_error: f64 = 0.0;
    for (s, frame) in vectors.iter().enumerate() {
        let g = model.metric(&geo.positions[s]);
        let v = DVector::from_column_slice(&geo.velocities[s]);
        for (i, ei) in frame.iter().enumerate() {
            orthonormality_error = orthonormality_error.max(inner(&g, ei, &v).abs());
            for (j, ej) in frame.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                orthonormality_error = orthonormality_error.max((inner(&g, ei, ej) - target).abs());
            }
        }
    }
    if orthonormality_error > 1e-6 {
        return Err(GeometryError::FrameDegeneracy(orthonormality_error));
    }

    // ∇_{γ̇}E_i by sixth-order differences; past the seam the frame is
    // continued through the holonomy
    let h = geo.spacing();
    let c = [1.0 / 60.0, -3.0 / 20.0, 3.0 / 4.0];
    let nn = start.len();
    let at = |s: isize, i: usize| -> DVector<f64> {
        let mi = m as isize;
        let wraps = s.div_euclid(mi);
        let r = s.rem_euclid(mi) as usize;
        match wraps {
            0 => vectors[r][i].clone(),
            1 => (0..nn).fold(DVector::zeros(model.dim()), |acc, j| acc + &vectors[r][j] * holonomy[(j, i)]),
            _ => {
                // wraps = -1: E(t - 2ℓ) = Σ_j (A^{-1})_{ji} E_j(t)
                (0..nn).fold(DVector::zeros(model.dim()), |acc, j| acc + &vectors[r][j] * holonomy[(i, j)])
            }
        }
    };
    let mut transport_residual: f64 = 0.0;
    for s in 0..m {
        let x = &geo.positions[s];
        let v = &geo.velocities[s];
        for i in 0..nn {
            let si = s as isize;
            let d = ((at(si + 3, i) - at(si - 3, i)) * c[0]
                + (at(si + 2, i) - at(si - 2, i)) * c[1]
                + (at(si + 1, i) - at(si - 1, i)) * c[2])
                / h;
            let gam = gamma_contract(model, x, v, vectors[s][i].as_slice());
            let r = d + DVector::from_vec(gam);
            transport_residual = transport_residual.max(r.amax());
        }
    }
    Ok(NormalFrame { vectors, holonomy, orthonormality_error, transport_residual, holonomy_relation_error })
}

/// Holonomy of transporting the same initial frame around the orbit in the
/// opposite direction.
pub fn reversed_holonomy(model: &ManifoldModel, geo: &ClosedGeodesic, frame: &NormalFrame) -> DMatrix<f64> {
    let v: Vec<f64> = geo.velocities[0].iter().map(|a| -a).collect();
    let mut run = transport(model, &geo.positions[0], &v, &frame.vectors[0], geo.period, 1, geo.samples() * geo.substeps);
    let last = run.pop().unwrap();
    let g0 = model.metric(&geo.positions[0]);
    holonomy_of(&g0, &frame.vectors[0], &last).0
}
