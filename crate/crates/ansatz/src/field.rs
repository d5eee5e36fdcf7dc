//! The approximate solution
//! `ũ(x_0, x) = μ_ε^{−(N−2)/2} ω((x − d_ε)/μ_ε)`,
//! `ω(y) = (1 + α_ε) w(y) + e_ε χ_ε(y) Z_0(y)`, with
//! `μ_ε = √ε (μ_0 + ε ln ε μ_1)`, `e_ε = ε (e_0 + ε ln ε e_1)`, `d_ε = ε d`.

use std::sync::Arc;

use filament_core::bubble::w;
use filament_core::radial::RadialGrid;
use filament_core::{Dimension, EigenPair};
use filament_geometry::FermiMetric;
use filament_ode::{PeriodicFunction, TrigInterp};
use filament_reduction::AnsatzParams;
use serde::{Deserialize, Serialize};

use crate::error::{AnsatzError, Result};

const D1: [f64; 7] = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
const D2: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AnsatzOptions {
    /// `χ(s) = 1` for `s ≤ δ`, `0` for `s ≥ 2δ`.
    pub cutoff: f64,
    /// Chart radius `δ̂` in `x` units.
    pub chart_radius: f64,
    /// Finite-difference step is `μ_ε / step_ratio`.
    pub step_ratio: f64,
}

impl Default for AnsatzOptions {
    fn default() -> Self {
        Self { cutoff: 1.0, chart_radius: 3.5, step_ratio: 50.0 }
    }
}

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff profile.
pub fn chi(s: f64, delta: f64) -> f64 {
    if s <= delta {
        1.0
    } else if s >= 2.0 * delta {
        0.0
    } else {
        let t = (s - delta) / delta;
        let (a, b) = (bump(1.0 - t), bump(t));
        a / (a + b)
    }
}

/// Parameters evaluated at one `x_0`.
#[derive(Debug, Clone)]
pub struct ParamPoint {
    pub x0: f64,
    pub mu_eps: f64,
    pub e_eps: f64,
    pub d_eps: Vec<f64>,
    /// `1 + α_ε`.
    pub amplitude: f64,
}

struct Interps {
    mu0: TrigInterp,
    mu1: TrigInterp,
    e0: TrigInterp,
    e1: TrigInterp,
    d: Vec<TrigInterp>,
}

pub struct AnsatzField {
    pub params: AnsatzParams,
    pub metric: Arc<dyn FermiMetric + Send>,
    pub h: PeriodicFunction,
    pub dim: Dimension,
    pub z0: RadialGrid,
    pub options: AnsatzOptions,
    interps: Arc<Interps>,
    h_interp: Arc<TrigInterp>,
}

impl Clone for AnsatzField {
    fn clone(&self) -> Self {
        Self {
            params: self.params.clone(),
            metric: self.metric.clone(),
            h: self.h.clone(),
            dim: self.dim,
            z0: self.z0.clone(),
            options: self.options,
            interps: self.interps.clone(),
            h_interp: self.h_interp.clone(),
        }
    }
}

/// Builds the field; fails when the support of `χ_ε` leaves the chart.
pub fn assemble(
    params: AnsatzParams,
    metric: Arc<dyn FermiMetric + Send>,
    h: &PeriodicFunction,
    pair: &EigenPair,
    dim: Dimension,
    options: AnsatzOptions,
) -> Result<AnsatzField> {
    let nn = dim.big_n;
    if metric.dim() != nn + 1 || params.d.width() != nn {
        return Err(AnsatzError::Input(format!(
            "metric of dimension {} and shift of width {} for N = {nn}",
            metric.dim(),
            params.d.width()
        )));
    }
    if (&params.d.twist - nalgebra::DMatrix::identity(nn, nn)).amax() > 1e-12 {
        return Err(AnsatzError::Input("twisted shifts are not interpolated".into()));
    }
    if h.len() != params.mu0.len() || (h.period - params.mu0.period).abs() > 1e-12 {
        return Err(AnsatzError::Input("h and parameters on different grids".into()));
    }
    let interps = Interps {
        mu0: params.mu0.interpolant(),
        mu1: params.mu1.interpolant(),
        e0: params.e0.interpolant(),
        e1: params.e1.interpolant(),
        d: (0..nn).map(|k| params.d.component(k).interpolant()).collect(),
    };
    let field = AnsatzField {
        params,
        metric,
        h: h.clone(),
        dim,
        z0: pair.z0.clone(),
        options,
        interps: Arc::new(interps),
        h_interp: Arc::new(h.interpolant()),
    };
    field.check_chart()?;
    Ok(field)
}

impl AnsatzField {
    pub fn eps(&self) -> f64 {
        self.params.eps
    }

    /// `ε ln ε`.
    fn log_eps(&self) -> f64 {
        let e = self.eps();
        e * e.ln()
    }

    fn check_chart(&self) -> Result<()> {
        let l = self.log_eps();
        let mu_max = self.params.mu0.zip(&self.params.mu1, |a, b| a + l * b).max();
        let needed = 2.0 * self.options.cutoff * mu_max;
        if needed > self.options.chart_radius {
            return Err(AnsatzError::ChartRadius { needed, radius: self.options.chart_radius });
        }
        Ok(())
    }

    /// Same field at another `ε`.
    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        let mut f = self.clone();
        f.params.eps = eps;
        f.check_chart()?;
        Ok(f)
    }

    /// Exponent of `μ_ε` in `1 + α_ε`, which balances the nonlinearity
    /// exactly: `(N−2) s ε / (2(p − 1 + s ε))`.
    pub fn amplitude_exponent(&self) -> f64 {
        let se = self.params.regime.sign() * self.eps();
        (self.dim.nf() - 2.0) * se / (2.0 * (self.dim.p - 1.0 + se))
    }

    /// Exponent `p + s ε` of the nonlinearity.
    pub fn exponent(&self) -> f64 {
        self.dim.p + self.params.regime.sign() * self.eps()
    }

    pub fn at(&self, x0: f64) -> ParamPoint {
        let (eps, l) = (self.eps(), self.log_eps());
        let i = &self.interps;
        let mu_eps = eps.sqrt() * (i.mu0.eval(x0) + l * i.mu1.eval(x0));
        let e_eps = eps * (i.e0.eval(x0) + l * i.e1.eval(x0));
        let d_eps = i.d.iter().map(|d| eps * d.eval(x0)).collect();
        ParamPoint { x0, mu_eps, e_eps, d_eps, amplitude: mu_eps.powf(self.amplitude_exponent()) }
    }

    /// `ω(y)` with the parameters at `p`.
    pub fn omega(&self, p: &ParamPoint, y: &[f64]) -> f64 {
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.omega_radial(p, r)
    }

    fn omega_radial(&self, p: &ParamPoint, r: f64) -> f64 {
        let mut v = p.amplitude * w(&self.dim, r);
        if p.e_eps != 0.0 {
            let c = chi(self.eps().sqrt() * r, self.options.cutoff);
            if c > 0.0 {
                v += p.e_eps * c * self.z0.eval(r);
            }
        }
        v
    }

    /// `ũ` at the chart point `(p.x0, x)`.
    pub fn u_tilde(&self, p: &ParamPoint, x: &[f64]) -> f64 {
        let mut r2 = 0.0;
        for (k, xk) in x.iter().enumerate() {
            let y = (xk - p.d_eps[k]) / p.mu_eps;
            r2 += y * y;
        }
        p.mu_eps.powf(-self.dim.weight()) * self.omega_radial(p, r2.sqrt())
    }

    /// Radius of the slice domain in `y` units at `x_0`.
    pub fn domain_radius(&self, p: &ParamPoint) -> f64 {
        let shift = p.d_eps.iter().map(|v| v * v).sum::<f64>().sqrt();
        let step = p.mu_eps / self.options.step_ratio;
        (self.options.chart_radius - shift - 3.0 * step) / p.mu_eps
    }

    /// Everything needed for residual evaluations at fixed `x_0`.
    pub fn slice(&self, x0: f64) -> Result<FieldSlice<'_>> {
        let center = self.at(x0);
        let step = center.mu_eps / self.options.step_ratio;
        if !(step > 0.0) || step > 0.1 * center.mu_eps {
            return Err(AnsatzError::StencilStep { step, mu: center.mu_eps });
        }
        let points = (-3..=3).map(|k| self.at(x0 + k as f64 * step)).collect();
        Ok(FieldSlice { field: self, step, h: self.h_interp.eval(x0), radius: self.domain_radius(&center), points })
    }
}

pub struct FieldSlice<'a> {
    pub field: &'a AnsatzField,
    pub step: f64,
    /// `h(x_0)`.
    pub h: f64,
    /// Domain radius in `y` units.
    pub radius: f64,
    /// Parameters at `x_0 + k·step`, `k = −3..=3`.
    points: Vec<ParamPoint>,
}

impl FieldSlice<'_> {
    pub fn center(&self) -> &ParamPoint {
        &self.points[3]
    }

    fn u(&self, k0: i32, x: &[f64]) -> f64 {
        self.field.u_tilde(&self.points[(k0 + 3) as usize], x)
    }

    /// `S_ε(y) = μ_ε^{(N+2)/2} [Δ_g ũ − h ũ + |ũ|^{q−1} ũ]` at
    /// `x = μ_ε y + d_ε`, all at this slice's `x_0`.
    pub fn residual(&self, y: &[f64]) -> Result<f64> {
        let f = self.field;
        let c = self.center();
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > self.radius {
            return Err(AnsatzError::OutsideChart { distance: r * c.mu_eps, radius: f.options.chart_radius });
        }
        let x: Vec<f64> = y.iter().zip(&c.d_eps).map(|(yk, dk)| c.mu_eps * yk + dk).collect();
        let (ginv, b) = f.metric.laplace_coeffs(c.x0, &x);
        let n = x.len() + 1;
        let hs = self.step;
        let u0 = self.u(0, &x);

        // derivatives along each coordinate: ∂_a u and ∂_aa u
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        let mut xs = x.clone();
        for a in 0..n {
            let (mut s1, mut s2) = (0.0, D2[3] * u0);
            for k in [-3i32, -2, -1, 1, 2, 3] {
                let v = if a == 0 {
                    self.u(k, &x)
                } else {
                    xs[a - 1] = x[a - 1] + k as f64 * hs;
                    let v = self.u(0, &xs);
                    xs[a - 1] = x[a - 1];
                    v
                };
                s1 += D1[(k + 3) as usize] * v;
                s2 += D2[(k + 3) as usize] * v;
            }
            d1[a] = s1 / hs;
            d2[a] = s2 / (hs * hs);
        }
        let mut lap = 0.0;
        for a in 0..n {
            lap += ginv[(a, a)] * d2[a] + b[a] * d1[a];
        }
        for a in 0..n {
            for bb in (a + 1)..n {
                let gab = ginv[(a, bb)];
                if gab != 0.0 {
                    lap += 2.0 * gab * self.mixed(a, bb, &x);
                }
            }
        }
        let q = f.exponent();
        let nonlin = u0.abs().powf(q - 1.0) * u0;
        Ok(c.mu_eps.powf((f.dim.nf() + 2.0) / 2.0) * (lap - self.h * u0 + nonlin))
    }

    /// `∂_a ∂_b u` for `a < b` from the tensor product of first-derivative
    /// stencils.
    fn mixed(&self, a: usize, b: usize, x: &[f64]) -> f64 {
        let hs = self.step;
        let mut xs = x.to_vec();
        let mut s = 0.0;
        for i in [-3i32, -2, -1, 1, 2, 3] {
            for j in [-3i32, -2, -1, 1, 2, 3] {
                let k0 = if a == 0 { i } else { 0 };
                if a > 0 {
                    xs[a - 1] = x[a - 1] + i as f64 * hs;
                }
                xs[b - 1] = x[b - 1] + j as f64 * hs;
                s += D1[(i + 3) as usize] * D1[(j + 3) as usize] * self.u(k0, &xs);
                xs.copy_from_slice(x);
            }
        }
        s / (hs * hs)
    }
}

/// `S_ε` at `(y_0, y)` with `x_0 = √ε y_0`.
pub fn residual_at(field: &AnsatzField, y0: f64, y: &[f64]) -> Result<f64> {
    field.slice(field.eps().sqrt() * y0)?.residual(y)
}
