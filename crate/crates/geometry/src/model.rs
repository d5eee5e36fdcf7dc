//! Built-in model manifolds in a single global chart.

use filament_core::CosineSeries;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Model definitions as read from config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// `R^n / Π L_a Z` with the Euclidean metric.
    FlatTorus { n: usize, lengths: Vec<f64> },
    /// `S^m(R) × T^{n-m}`; the sphere factor in a stereographic chart, which
    /// maps the equator to `|u| = R`.
    SphereProduct {
        n: usize,
        sphere_dim: usize,
        radius: f64,
        torus_lengths: Vec<f64>,
    },
    /// `g = δ + H dx_0²` with `H = Σ_k a_k(x_0) s_k(x_k)²`,
    /// `s_k = (L/π) sin(π x_k / L)`. `H` vanishes to second order on the axis
    /// line, which therefore stays a unit-speed geodesic.
    PerturbedTorus {
        n: usize,
        axis_length: f64,
        side: f64,
        bumps: Vec<CosineSeries>,
    },
}

#[derive(Debug, Clone)]
pub struct ManifoldModel {
    pub spec: ModelSpec,
    n: usize,
}

impl ManifoldModel {
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let n = match &spec {
            ModelSpec::FlatTorus { n, lengths } => {
                if lengths.len() != *n {
                    return Err(GeometryError::Shape(format!("{} lengths for n = {n}", lengths.len())));
                }
                *n
            }
            ModelSpec::SphereProduct { n, sphere_dim, radius, torus_lengths } => {
                if *sphere_dim < 2 || sphere_dim + torus_lengths.len() != *n || *radius <= 0.0 {
                    return Err(GeometryError::Shape("sphere product factors".into()));
                }
                *n
            }
            ModelSpec::PerturbedTorus { n, bumps, axis_length, .. } => {
                if bumps.len() != n - 1 {
                    return Err(GeometryError::Shape(format!("{} bumps for n = {n}", bumps.len())));
                }
                if bumps.iter().any(|b| (b.period - axis_length).abs() > 1e-12 * axis_length) {
                    return Err(GeometryError::Shape("bump period must equal the axis length".into()));
                }
                *n
            }
        };
        Ok(Self { spec, n })
    }

    pub fn flat_torus(n: usize, length: f64) -> Self {
        Self::new(ModelSpec::FlatTorus { n, lengths: vec![length; n] }).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &'static str {
        match self.spec {
            ModelSpec::FlatTorus { .. } => "flat-torus",
            ModelSpec::SphereProduct { .. } => "sphere-product",
            ModelSpec::PerturbedTorus { .. } => "perturbed-torus",
        }
    }

    /// Lattice period of each coordinate, `None` for non-periodic chart
    /// directions.
    pub fn periods(&self) -> Vec<Option<f64>> {
        match &self.spec {
            ModelSpec::FlatTorus { lengths, .. } => lengths.iter().map(|l| Some(*l)).collect(),
            ModelSpec::SphereProduct { sphere_dim, torus_lengths, .. } => {
                let mut v = vec![None; *sphere_dim];
                v.extend(torus_lengths.iter().map(|l| Some(*l)));
                v
            }
            ModelSpec::PerturbedTorus { n, axis_length, side, .. } => {
                let mut v = vec![Some(*side); *n];
                v[0] = Some(*axis_length);
                v
            }
        }
    }

    pub fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.n;
        match &self.spec {
            ModelSpec::FlatTorus { .. } => DMatrix::identity(n, n),
            ModelSpec::SphereProduct { sphere_dim, radius, .. } => {
                let (phi, _, _) = stereo(*radius, &x[..*sphere_dim]);
                let mut g = DMatrix::identity(n, n);
                for i in 0..*sphere_dim {
                    g[(i, i)] = phi;
                }
                g
            }
            ModelSpec::PerturbedTorus { side, bumps, .. } => {
                let mut g = DMatrix::identity(n, n);
                g[(0, 0)] += bump(*side, bumps, x).0;
                g
            }
        }
    }

    /// `∂_c g_ab`, indexed `[c][(a, b)]`.
    pub fn metric_d1(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.n;
        let mut out = vec![DMatrix::zeros(n, n); n];
        match &self.spec {
            ModelSpec::FlatTorus { .. } => {}
            ModelSpec::SphereProduct { sphere_dim, radius, .. } => {
                let (_, dphi, _) = stereo(*radius, &x[..*sphere_dim]);
                for (c, d) in dphi.iter().enumerate() {
                    for i in 0..*sphere_dim {
                        out[c][(i, i)] = *d;
                    }
                }
            }
            ModelSpec::PerturbedTorus { side, bumps, .. } => {
                let (_, dh, _) = bump(*side, bumps, x);
                for c in 0..n {
                    out[c][(0, 0)] = dh[c];
                }
            }
        }
        Some(out)
    }

    /// `∂_c ∂_d g_ab`, indexed `[c * n + d][(a, b)]`.
    pub fn metric_d2(&self, x: &[f64]) -> Option<Vec<DMatrix<f64>>> {
        let n = self.n;
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        match &self.spec {
            ModelSpec::FlatTorus { .. } => {}
            ModelSpec::SphereProduct { sphere_dim, radius, .. } => {
                let m = *sphere_dim;
                let (_, _, ddphi) = stereo(*radius, &x[..m]);
                for c in 0..m {
                    for d in 0..m {
                        for i in 0..m {
                            out[c * n + d][(i, i)] = ddphi[c * m + d];
                        }
                    }
                }
            }
            ModelSpec::PerturbedTorus { side, bumps, .. } => {
                let (_, _, ddh) = bump(*side, bumps, x);
                for cd in 0..n * n {
                    out[cd][(0, 0)] = ddh[cd];
                }
            }
        }
        Some(out)
    }

    /// Cholesky test of the metric at `x`.
    pub fn check_positive(&self, x: &[f64]) -> Result<()> {
        if self.metric(x).cholesky().is_none() {
            return Err(GeometryError::NotPositiveDefinite(x.to_vec()));
        }
        Ok(())
    }
}

/// Conformal factor `φ = 4R⁴/(R²+|u|²)²` with its gradient and Hessian
/// (row-major `m × m`).
fn stereo(r: f64, u: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let m = u.len();
    let r4 = r.powi(4);
    let d = r * r + u.iter().map(|v| v * v).sum::<f64>();
    let phi = 4.0 * r4 / (d * d);
    let dphi = u.iter().map(|ui| -16.0 * r4 * ui / d.powi(3)).collect();
    let mut dd = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let delta = if i == j { 1.0 } else { 0.0 };
            dd[i * m + j] = -16.0 * r4 * (delta / d.powi(3) - 6.0 * u[i] * u[j] / d.powi(4));
        }
    }
    (phi, dphi, dd)
}

/// `H`, `∂H`, `∂∂H` (row-major `n × n`) of the perturbed torus.
fn bump(side: f64, bumps: &[CosineSeries], x: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let n = x.len();
    let k = std::f64::consts::PI / side;
    let mut h = 0.0;
    let mut dh = vec![0.0; n];
    let mut ddh = vec![0.0; n * n];
    for (i, b) in bumps.iter().enumerate() {
        let c = i + 1;
        let (a, a1, a2) = (b.value(x[0]), b.d1(x[0]), b.d2(x[0]));
        let s = (k * x[c]).sin() / k;
        let s1 = (k * x[c]).cos();
        let s2 = -k * (k * x[c]).sin();
        h += a * s * s;
        dh[0] += a1 * s * s;
        dh[c] = 2.0 * a * s * s1;
        ddh[0] += a2 * s * s;
        ddh[c] = 2.0 * a1 * s * s1;
        ddh[c * n] = ddh[c];
        ddh[c * n + c] = 2.0 * a * (s1 * s1 + s * s2);
    }
    (h, dh, ddh)
}
