//! Closed geodesics by periodic shooting.

use filament_core::numerics::rk4_step;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::model::ManifoldModel;
use crate::tensor::{christoffel, Derivatives};

/// `Γ^a_bc u^b w^c` at `x`.
pub fn gamma_contract(model: &ManifoldModel, x: &[f64], u: &[f64], w: &[f64]) -> Vec<f64> {
    let n = model.dim();
    let Some(d1) = model.metric_d1(x) else {
        let g = christoffel(model, x, Derivatives::Analytic).expect("metric invertible along the flow");
        return (0..n)
            .map(|a| {
                let mut s = 0.0;
                for b in 0..n {
                    for c in 0..n {
                        s += g[(a * n + b) * n + c] * u[b] * w[c];
                    }
                }
                s
            })
            .collect();
    };
    // Γ_ebc u^b w^c, then raise the index with a Cholesky solve
    let mut low = DVector::zeros(n);
    for e in 0..n {
        let mut s = 0.0;
        for b in 0..n {
            for c in 0..n {
                let uw = u[b] * w[c];
                if uw != 0.0 {
                    s += (d1[b][(e, c)] + d1[c][(e, b)] - d1[e][(b, c)]) * uw;
                }
            }
        }
        low[e] = 0.5 * s;
    }
    let chol = model.metric(x).cholesky().expect("metric positive definite along the flow");
    chol.solve(&low).iter().copied().collect()
}

/// Right-hand side of the geodesic spray on `(x, v)`.
pub fn spray(model: &ManifoldModel, y: &[f64]) -> Vec<f64> {
    let n = model.dim();
    let (x, v) = y.split_at(n);
    let acc = gamma_contract(model, x, v, v);
    let mut out = v.to_vec();
    out.extend(acc.iter().map(|a| -a));
    out
}

/// Integrate the spray from `(x, v)` over time `t` in `steps` RK4 steps.
pub fn flow(model: &ManifoldModel, x: &[f64], v: &[f64], t: f64, steps: usize) -> (Vec<f64>, Vec<f64>) {
    let n = model.dim();
    let mut y: Vec<f64> = x.iter().chain(v).copied().collect();
    let h = t / steps as f64;
    for i in 0..steps {
        y = rk4_step(&|_, s: &[f64]| spray(model, s), i as f64 * h, &y, h);
    }
    let v = y.split_off(n);
    (y, v)
}

pub fn speed(model: &ManifoldModel, x: &[f64], v: &[f64]) -> f64 {
    let vv = DVector::from_column_slice(v);
    (vv.transpose() * model.metric(x) * &vv)[(0, 0)].sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicGuess {
    pub point: Vec<f64>,
    pub direction: Vec<f64>,
    pub period: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GeodesicOptions {
    /// Number of stored samples over one period.
    pub samples: usize,
    /// RK4 substeps between stored samples.
    pub substeps: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self { samples: 512, substeps: 2, tol: 1e-11, max_iter: 40 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedGeodesic {
    /// Length `2ℓ`.
    pub period: f64,
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    /// Lattice translation closing the orbit in the chart.
    pub lattice_shift: Vec<f64>,
    pub closure_position: f64,
    pub closure_velocity: f64,
    pub speed_error: f64,
    pub equation_residual: f64,
    pub substeps: usize,
}

impl ClosedGeodesic {
    pub fn samples(&self) -> usize {
        self.positions.len()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.samples() as f64
    }

    /// `(γ(t), γ̇(t))` by integrating from the nearest stored sample.
    pub fn state_at(&self, model: &ManifoldModel, t: f64) -> (Vec<f64>, Vec<f64>) {
        let h = self.spacing();
        let m = self.samples();
        let wraps = (t / self.period).floor();
        let tt = t - wraps * self.period;
        let i = ((tt / h).round() as usize).min(m);
        let (mut x, v) = if i == m {
            let x: Vec<f64> = self.positions[0].iter().zip(&self.lattice_shift).map(|(a, s)| a + s).collect();
            (x, self.velocities[0].clone())
        } else {
            (self.positions[i].clone(), self.velocities[i].clone())
        };
        let dt = tt - i as f64 * h;
        let steps = ((dt.abs() / h * self.substeps as f64).ceil() as usize).max(1);
        let (x2, v2) = if dt == 0.0 { (x.clone(), v) } else { flow(model, &x, &v, dt, steps) };
        x = x2;
        for (a, s) in x.iter_mut().zip(&self.lattice_shift) {
            *a += wraps * s;
        }
        (x, v2)
    }
}

fn closure(model: &ManifoldModel, z: &[f64], steps: usize) -> (Vec<f64>, Vec<f64>) {
    let n = model.dim();
    let (x, rest) = z.split_at(n);
    let (v, t) = rest.split_at(n);
    let (xt, vt) = flow(model, x, v, t[0], steps);
    let shift: Vec<f64> = model
        .periods()
        .iter()
        .enumerate()
        .map(|(a, p)| p.map_or(0.0, |l| ((xt[a] - x[a]) / l).round() * l))
        .collect();
    let mut f = Vec::with_capacity(2 * n + 1);
    for a in 0..n {
        f.push(xt[a] - x[a] - shift[a]);
    }
    for a in 0..n {
        f.push(vt[a] - v[a]);
    }
    f.push(speed(model, x, v).powi(2) - 1.0);
    (f, shift)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Gauss-Newton on the periodic shooting map in `(x, v, T)`. The map has
/// neutral directions (time shift, symmetry families), so steps are minimum
/// norm through an SVD.
pub fn find_closed_geodesic(
    model: &ManifoldModel,
    guess: &GeodesicGuess,
    opts: &GeodesicOptions,
) -> Result<ClosedGeodesic> {
    let n = model.dim();
    let steps = opts.samples * opts.substeps;
    let s0 = speed(model, &guess.point, &guess.direction);
    let mut z: Vec<f64> = guess.point.clone();
    z.extend(guess.direction.iter().map(|v| v / s0));
    z.push(guess.period);
    let (mut f, _) = closure(model, &z, steps);
    let mut defect = norm(&f);
    let mut iter = 0;
    while defect > opts.tol {
        if iter >= opts.max_iter || !defect.is_finite() {
            return Err(GeometryError::NewtonDivergence { defect });
        }
        iter += 1;
        let m = 2 * n + 1;
        let mut jac = DMatrix::zeros(m, m);
        for c in 0..m {
            let dz = 1e-7 * z[c].abs().max(1.0);
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[c] += dz;
            zm[c] -= dz;
            let (fp, _) = closure(model, &zp, steps);
            let (fm, _) = closure(model, &zm, steps);
            for r in 0..m {
                jac[(r, c)] = (fp[r] - fm[r]) / (2.0 * dz);
            }
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let rhs = DVector::from_vec(f.clone());
        let step = svd
            .solve(&rhs, 1e-6 * smax)
            .map_err(|_| GeometryError::NewtonDivergence { defect })?;
        let mut lam = 1.0;
        loop {
            let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, d)| a - lam * d).collect();
            let (ft, _) = closure(model, &trial, steps);
            if norm(&ft) < defect || lam < 1e-4 {
                z = trial;
                f = ft;
                break;
            }
            lam *= 0.5;
        }
        defect = norm(&f);
        if z[2 * n] < 1e-6 {
            return Err(GeometryError::PeriodCollapse(z[2 * n]));
        }
    }
    // arclength normalization
    let s = speed(model, &z[..n], &z[n..2 * n]);
    for a in n..2 * n {
        z[a] /= s;
    }
    z[2 * n] *= s;
    sample_orbit(model, &z, opts)
}

fn sample_orbit(model: &ManifoldModel, z: &[f64], opts: &GeodesicOptions) -> Result<ClosedGeodesic> {
    let n = model.dim();
    let period = z[2 * n];
    let m = opts.samples;
    let h = period / m as f64;
    let mut positions = Vec::with_capacity(m);
    let mut velocities = Vec::with_capacity(m);
    let (mut x, mut v) = (z[..n].to_vec(), z[n..2 * n].to_vec());
    for _ in 0..m {
        positions.push(x.clone());
        velocities.push(v.clone());
        let (x2, v2) = flow(model, &x, &v, h, opts.substeps);
        x = x2;
        v = v2;
    }
    let (f, shift) = closure(model, z, m * opts.substeps);
    let closure_position = norm(&f[..n]);
    let closure_velocity = norm(&f[n..2 * n]);
    let speed_error = positions
        .iter()
        .zip(&velocities)
        .map(|(x, v)| (speed(model, x, v) - 1.0).abs())
        .fold(0.0, f64::max);
    // ODE residual with sixth-order periodic differences of the velocity
    let c = [1.0 / 60.0, -3.0 / 20.0, 3.0 / 4.0];
    let mut equation_residual: f64 = 0.0;
    for i in 0..m {
        let acc = gamma_contract(model, &positions[i], &velocities[i], &velocities[i]);
        for a in 0..n {
            let vel = |k: isize| velocities[(i as isize + k).rem_euclid(m as isize) as usize][a];
            let d = (c[0] * (vel(3) - vel(-3)) + c[1] * (vel(2) - vel(-2)) + c[2] * (vel(1) - vel(-1))) / h;
            equation_residual = equation_residual.max((d + acc[a]).abs());
        }
    }
    Ok(ClosedGeodesic {
        period,
        positions,
        velocities,
        lattice_shift: shift,
        closure_position,
        closure_velocity,
        speed_error,
        equation_residual,
        substeps: opts.substeps,
    })
}
