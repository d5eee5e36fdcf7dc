//! Fermi coordinates `(x_0, x) ↦ exp_{γ(x_0)}(Σ x_i E_i(x_0))` and the
//! pulled-back metric.

use filament_core::numerics::rk4_step;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::frame::NormalFrame;
use crate::geodesic::{gamma_contract, ClosedGeodesic};
use crate::model::{ManifoldModel, ModelSpec};
use crate::tensor::{christoffel, christoffel_d1, curvature_at, Derivatives};

/// Measured relation `g_00 = 1 + S Σ R_{0k0l} x_k x_l + O(|x|³)` (and
/// `g_ij = δ_ij + S/3 Σ R_{ikjl} x_k x_l`) in this crate's curvature
/// convention; fixed by `expansion_check` on the sphere-product model.
pub const EXPANSION_SIGN: f64 = -1.0;

/// A metric written in Fermi coordinates `(x_0, x_1, …, x_N)`.
pub trait FermiMetric: Sync {
    fn dim(&self) -> usize;

    fn metric(&self, x0: f64, x: &[f64]) -> DMatrix<f64>;

    /// `(g^{ab}, b^b)` with `Δ_g u = g^{ab} ∂_ab u + b^b ∂_b u`,
    /// `b^b = |g|^{-1/2} ∂_a(|g|^{1/2} g^{ab})`. The default differentiates
    /// the metric numerically.
    fn laplace_coeffs(&self, x0: f64, x: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
        let n = self.dim();
        let dens = |x0: f64, x: &[f64]| -> DMatrix<f64> {
            let g = self.metric(x0, x);
            let sq = g.determinant().sqrt();
            g.try_inverse().expect("metric invertible") * sq
        };
        let g = self.metric(x0, x);
        let sq = g.determinant().sqrt();
        let ginv = g.try_inverse().expect("metric invertible");
        let h = 1e-4;
        let mut b = vec![0.0; n];
        for a in 0..n {
            let (p, m) = if a == 0 {
                (dens(x0 + h, x), dens(x0 - h, x))
            } else {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[a - 1] += h;
                xm[a - 1] -= h;
                (dens(x0, &xp), dens(x0, &xm))
            };
            let d = (p - m) / (2.0 * h);
            for (bb, v) in b.iter_mut().enumerate() {
                *v += d[(a, bb)] / sq;
            }
        }
        (ginv, b)
    }
}

/// Fermi chart built numerically from the geodesic spray.
#[derive(Debug, Clone)]
pub struct FermiChart {
    pub model: ManifoldModel,
    pub geodesic: ClosedGeodesic,
    pub frame: NormalFrame,
    /// Chart radius `δ̂`.
    pub radius: f64,
}

impl FermiChart {
    pub fn new(model: ManifoldModel, geodesic: ClosedGeodesic, frame: NormalFrame, radius: f64) -> Self {
        Self { model, geodesic, frame, radius }
    }

    /// `(γ(x_0), γ̇(x_0), E_1..E_N at x_0)`.
    pub fn base(&self, x0: f64) -> (Vec<f64>, Vec<f64>, Vec<DVector<f64>>) {
        let geo = &self.geodesic;
        let n = self.model.dim();
        let m = geo.samples() as isize;
        let h = geo.spacing();
        let k = (x0 / h).round() as isize;
        let wraps = k.div_euclid(m);
        let i = k.rem_euclid(m) as usize;
        let mut x: Vec<f64> = geo.positions[i].clone();
        for (a, s) in x.iter_mut().zip(&geo.lattice_shift) {
            *a += wraps as f64 * s;
        }
        let v = geo.velocities[i].clone();
        // E at sample i after `wraps` turns: E_i(t + 2ℓ) = Σ_j a_ji E_j(t)
        let a = &self.frame.holonomy;
        let mut power = DMatrix::identity(a.nrows(), a.nrows());
        for _ in 0..wraps.unsigned_abs() {
            power = if wraps > 0 { &power * a } else { &power * a.transpose() };
        }
        let es: Vec<DVector<f64>> = (0..a.nrows())
            .map(|c| (0..a.nrows()).fold(DVector::zeros(n), |acc, j| acc + &self.frame.vectors[i][j] * power[(j, c)]))
            .collect();
        let dt = x0 - k as f64 * h;
        if dt == 0.0 {
            return (x, v, es);
        }
        let mut y: Vec<f64> = x.iter().chain(&v).copied().collect();
        for e in &es {
            y.extend(e.iter());
        }
        let steps = geo.substeps.max(2);
        let hs = dt / steps as f64;
        let model = &self.model;
        let count = es.len();
        for s in 0..steps {
            y = rk4_step(
                &|_, z: &[f64]| {
                    let (xx, vv) = (&z[..n], &z[n..2 * n]);
                    let mut out = vv.to_vec();
                    out.extend(gamma_contract(model, xx, vv, vv).iter().map(|a| -a));
                    for c in 0..count {
                        let e = &z[2 * n + c * n..2 * n + (c + 1) * n];
                        out.extend(gamma_contract(model, xx, vv, e).iter().map(|a| -a));
                    }
                    out
                },
                s as f64 * hs,
                &y,
                hs,
            );
        }
        let es = (0..count).map(|c| DVector::from_column_slice(&y[2 * n + c * n..2 * n + (c + 1) * n])).collect();
        (y[..n].to_vec(), y[n..2 * n].to_vec(), es)
    }

    fn steps_for(&self, x: &[f64]) -> usize {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        ((96.0 * r).ceil() as usize).max(24)
    }

    fn check_radius(&self, x: &[f64]) -> Result<()> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > self.radius {
            return Err(GeometryError::LeftChart(x.to_vec()));
        }
        Ok(())
    }

    pub fn fermi_map(&self, x0: f64, x: &[f64]) -> Result<Vec<f64>> {
        self.check_radius(x)?;
        let n = self.model.dim();
        let (p, _, es) = self.base(x0);
        let v = es.iter().zip(x).fold(DVector::zeros(n), |acc, (e, c)| acc + e * *c);
        let (q, _) = crate::geodesic::flow(&self.model, &p, v.as_slice(), 1.0, self.steps_for(x));
        if q.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::LeftChart(x.to_vec()));
        }
        Ok(q)
    }

    /// Pullback metric through the variational equations of the spray.
    pub fn pullback_metric(&self, x0: f64, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_radius(x)?;
        let model = &self.model;
        let n = model.dim();
        let (p, gd, es) = self.base(x0);
        let v = es.iter().zip(x).fold(DVector::zeros(n), |acc, (e, c)| acc + e * *c);
        // state: position, velocity, then n variations (δx, δv)
        let mut y: Vec<f64> = p.iter().chain(v.iter()).copied().collect();
        y.extend(gd.iter());
        y.extend(gamma_contract(model, &p, &gd, v.as_slice()).iter().map(|a| -a));
        for e in &es {
            y.extend(std::iter::repeat(0.0).take(n));
            y.extend(e.iter());
        }
        let rhs = |_: f64, z: &[f64]| -> Vec<f64> {
            let (xx, vv) = (&z[..n], &z[n..2 * n]);
            let gam = christoffel(model, xx, Derivatives::Analytic).expect("metric invertible");
            let dgam = christoffel_d1(model, xx, Derivatives::Analytic).expect("metric invertible");
            let n3 = n * n * n;
            let mut out = vv.to_vec();
            let mut acc = vec![0.0; n];
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        acc[a] -= gam[(a * n + b) * n + c] * vv[b] * vv[c];
                    }
                }
            }
            out.extend(acc);
            for k in 0..n {
                let off = 2 * n + 2 * n * k;
                let (dx, dv) = (&z[off..off + n], &z[off + n..off + 2 * n]);
                out.extend(dv.iter());
                for a in 0..n {
                    let mut s = 0.0;
                    for b in 0..n {
                        for c in 0..n {
                            let gbc = gam[(a * n + b) * n + c];
                            s -= 2.0 * gbc * vv[b] * dv[c];
                            let vv_bc = vv[b] * vv[c];
                            if vv_bc != 0.0 {
                                for d in 0..n {
                                    s -= dgam[d * n3 + (a * n + b) * n + c] * dx[d] * vv_bc;
                                }
                            }
                        }
                    }
                    out.push(s);
                }
            }
            out
        };
        let steps = self.steps_for(x);
        let h = 1.0 / steps as f64;
        for s in 0..steps {
            y = rk4_step(&rhs, s as f64 * h, &y, h);
        }
        let q = &y[..n];
        let jac = DMatrix::from_fn(n, n, |a, k| y[2 * n + 2 * n * k + a]);
        Ok(jac.transpose() * model.metric(q) * jac)
    }
}

impl FermiMetric for FermiChart {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn metric(&self, x0: f64, x: &[f64]) -> DMatrix<f64> {
        self.pullback_metric(x0, x).expect("point inside chart")
    }
}

/// Closed-form Fermi metric of the perturbed torus around its axis line,
/// where chart and Fermi coordinates coincide: `g = diag(1 + H, 1, …, 1)`.
#[derive(Debug, Clone)]
pub struct PerturbedTorusFermi {
    pub model: ManifoldModel,
}

impl PerturbedTorusFermi {
    pub fn new(model: ManifoldModel) -> Option<Self> {
        matches!(model.spec, ModelSpec::PerturbedTorus { .. }).then_some(Self { model })
    }

    fn point(x0: f64, x: &[f64]) -> Vec<f64> {
        std::iter::once(x0).chain(x.iter().copied()).collect()
    }
}

impl FermiMetric for PerturbedTorusFermi {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn metric(&self, x0: f64, x: &[f64]) -> DMatrix<f64> {
        self.model.metric(&Self::point(x0, x))
    }

    fn laplace_coeffs(&self, x0: f64, x: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
        let n = self.dim();
        let pt = Self::point(x0, x);
        let g00 = self.model.metric(&pt)[(0, 0)];
        let d1 = self.model.metric_d1(&pt).expect("analytic model");
        let mut ginv = DMatrix::identity(n, n);
        ginv[(0, 0)] = 1.0 / g00;
        let mut b = vec![0.0; n];
        // |g|^{1/2} = g00^{1/2}: b^0 = g00^{-1/2} ∂_0 g00^{-1/2}, b^k = ∂_k ln g00^{1/2}
        b[0] = -0.5 * d1[0][(0, 0)] / (g00 * g00);
        for k in 1..n {
            b[k] = 0.5 * d1[k][(0, 0)] / g00;
        }
        (ginv, b)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub x0: f64,
    pub step: f64,
    /// `max |g_ab(x_0, 0) − δ_ab|`.
    pub identity_error: f64,
    /// `max |∂_m g_ab(x_0, 0)|`.
    pub first_order_max: f64,
    /// `∂_k∂_l g_00` (row-major `N × N`).
    pub g00_hessian: Vec<f64>,
    /// `R_{0k0l}` in the frame, same layout.
    pub r0k0l: Vec<f64>,
    /// Least-squares `c` in `∂_k∂_l g_00 ≈ c R_{0k0l}`, `None` when flat.
    pub g00_coefficient: Option<f64>,
    /// `max |∂_k∂_l g_00 − 2 S R_{0k0l}| / max |2 R_{0k0l}|`.
    pub g00_relative_mismatch: Option<f64>,
    /// Least-squares `c` in `∂_k∂_l g_ij ≈ c (R_{ikjl} + R_{iljk}) / 3`.
    pub gij_coefficient: Option<f64>,
    pub gij_relative_mismatch: Option<f64>,
    /// Largest second-order coefficient of any metric entry.
    pub quadratic_max: f64,
    /// Richardson error estimate of the second derivatives.
    pub extrapolation_error: f64,
}

/// Finite-difference Taylor coefficients of the pulled-back metric at
/// `(x_0, 0)`, compared with the frame curvature.
pub fn expansion_check(chart: &FermiChart, x0: f64, step: f64) -> Result<ExpansionReport> {
    let n = chart.model.dim();
    let nn = n - 1;
    let eval = |x: &[f64]| chart.pullback_metric(x0, x);
    let g0 = eval(&vec![0.0; nn])?;
    let identity_error = (&g0 - DMatrix::identity(n, n)).amax();

    let point = |pairs: &[(usize, f64)]| -> Vec<f64> {
        let mut x = vec![0.0; nn];
        for (k, v) in pairs {
            x[*k] += v;
        }
        x
    };
    // first and second derivatives at step h
    let derivs = |h: f64| -> Result<(Vec<DMatrix<f64>>, Vec<DMatrix<f64>>)> {
        let mut plus = Vec::with_capacity(nn);
        let mut minus = Vec::with_capacity(nn);
        for k in 0..nn {
            plus.push(eval(&point(&[(k, h)]))?);
            minus.push(eval(&point(&[(k, -h)]))?);
        }
        let first: Vec<DMatrix<f64>> = (0..nn).map(|k| (&plus[k] - &minus[k]) / (2.0 * h)).collect();
        let mut second = vec![DMatrix::zeros(n, n); nn * nn];
        for k in 0..nn {
            second[k * nn + k] = (&plus[k] - &g0 * 2.0 + &minus[k]) / (h * h);
            for l in k + 1..nn {
                let pp = eval(&point(&[(k, h), (l, h)]))?;
                let pm = eval(&point(&[(k, h), (l, -h)]))?;
                let mp = eval(&point(&[(k, -h), (l, h)]))?;
                let mm = eval(&point(&[(k, -h), (l, -h)]))?;
                let d = (pp - pm - mp + mm) / (4.0 * h * h);
                second[k * nn + l] = d.clone();
                second[l * nn + k] = d;
            }
        }
        Ok((first, second))
    };
    let (f1, s1) = derivs(step)?;
    let (f2, s2) = derivs(step / 2.0)?;
    let first: Vec<DMatrix<f64>> = f1.iter().zip(&f2).map(|(a, b)| (b * 4.0 - a) / 3.0).collect();
    let second: Vec<DMatrix<f64>> = s1.iter().zip(&s2).map(|(a, b)| (b * 4.0 - a) / 3.0).collect();
    let extrapolation_error = s1.iter().zip(&s2).map(|(a, b)| (b - a).amax() / 3.0).fold(0.0, f64::max);
    let first_order_max = first.iter().map(|m| m.amax()).fold(0.0, f64::max);
    let quadratic_max = second.iter().map(|m| m.amax()).fold(0.0, f64::max) / 2.0;

    let (p, v, es) = chart.base(x0);
    let mut frame = vec![DVector::from_vec(v)];
    frame.extend(es);
    let riem = curvature_at(&chart.model, &p, &frame, Derivatives::Analytic)?;

    let g00_hessian: Vec<f64> = second.iter().map(|m| m[(0, 0)]).collect();
    let r0k0l: Vec<f64> = (0..nn * nn).map(|kl| riem.get(0, kl / nn + 1, 0, kl % nn + 1)).collect();
    let fit = |data: &[f64], model: &[f64]| -> (Option<f64>, Option<f64>) {
        let mm: f64 = model.iter().map(|v| v * v).sum();
        let scale = model.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale < 1e-12 {
            return (None, None);
        }
        let c = data.iter().zip(model).map(|(d, m)| d * m).sum::<f64>() / mm;
        let target = 2.0 * EXPANSION_SIGN;
        let mis = data.iter().zip(model).map(|(d, m)| (d - target * m).abs()).fold(0.0, f64::max);
        (Some(c), Some(mis / (2.0 * scale)))
    };
    let (g00_coefficient, g00_relative_mismatch) = fit(&g00_hessian, &r0k0l);

    let mut gij_data = Vec::new();
    let mut gij_model = Vec::new();
    for i in 1..n {
        for j in 1..n {
            for k in 1..n {
                for l in 1..n {
                    gij_data.push(second[(k - 1) * nn + (l - 1)][(i, j)]);
                    gij_model.push((riem.get(i, k, j, l) + riem.get(i, l, j, k)) / 3.0);
                }
            }
        }
    }
    // the g_ij block carries S/3 (R_ikjl + R_iljk), so rescale the target
    let half: Vec<f64> = gij_model.iter().map(|v| v / 2.0).collect();
    let (gij_c, gij_mis) = fit(&gij_data, &half);
    Ok(ExpansionReport {
        x0,
        step,
        identity_error,
        first_order_max,
        g00_hessian,
        r0k0l,
        g00_coefficient,
        g00_relative_mismatch,
        gij_coefficient: gij_c.map(|c| c / 2.0),
        gij_relative_mismatch: gij_mis,
        quadratic_max,
        extrapolation_error,
    })
}
