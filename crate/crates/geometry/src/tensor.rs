//! Christoffel symbols and the Riemann tensor in chart coordinates.
//!
//! Convention: `R_abcd = g(R(e_c, e_d) e_b, e_a)` with
//! `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`, so `R_abab > 0` on round spheres.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::model::ManifoldModel;

/// How metric derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivatives {
    /// Closed-form derivatives of the model, falling back to differences.
    Analytic,
    /// Nested central differences with step `h`; with `richardson` the
    /// curvature from `h` and `h/2` is combined to cancel the `h²` term.
    FiniteDifference { h: f64, richardson: bool },
}

impl Default for Derivatives {
    fn default() -> Self {
        Derivatives::Analytic
    }
}

/// `Γ^a_bc`, stored `[(a n + b) n + c]`.
pub type Christoffel = Vec<f64>;

fn christoffel_from(g: &DMatrix<f64>, d1: &[DMatrix<f64>]) -> Result<Christoffel> {
    let n = g.nrows();
    let ginv = g.clone().try_inverse().ok_or_else(|| GeometryError::NotPositiveDefinite(vec![]))?;
    let mut lower = vec![0.0; n * n * n];
    for e in 0..n {
        for b in 0..n {
            for c in 0..n {
                lower[(e * n + b) * n + c] = 0.5 * (d1[b][(e, c)] + d1[c][(e, b)] - d1[e][(b, c)]);
            }
        }
    }
    let mut out = vec![0.0; n * n * n];
    for a in 0..n {
        for e in 0..n {
            let gi = ginv[(a, e)];
            if gi == 0.0 {
                continue;
            }
            for bc in 0..n * n {
                out[a * n * n + bc] += gi * lower[e * n * n + bc];
            }
        }
    }
    Ok(out)
}

fn shifted(x: &[f64], c: usize, dx: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[c] += dx;
    y
}

fn metric_d1_fd(model: &ManifoldModel, x: &[f64], h: f64) -> Vec<DMatrix<f64>> {
    (0..model.dim())
        .map(|c| (model.metric(&shifted(x, c, h)) - model.metric(&shifted(x, c, -h))) / (2.0 * h))
        .collect()
}

pub fn christoffel(model: &ManifoldModel, x: &[f64], deriv: Derivatives) -> Result<Christoffel> {
    let g = model.metric(x);
    match deriv {
        Derivatives::Analytic => match model.metric_d1(x) {
            Some(d1) => christoffel_from(&g, &d1),
            None => christoffel_from(&g, &metric_d1_fd(model, x, 1e-4)),
        },
        Derivatives::FiniteDifference { h, .. } => {
            check_step(h)?;
            christoffel_from(&g, &metric_d1_fd(model, x, h))
        }
    }
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 1e-7) {
        return Err(GeometryError::StepUnderflow(h));
    }
    Ok(())
}

/// `∂_d Γ^a_bc`, stored `[d n³ + (a n + b) n + c]`.
pub fn christoffel_d1(model: &ManifoldModel, x: &[f64], deriv: Derivatives) -> Result<Vec<f64>> {
    let n = model.dim();
    if let (Derivatives::Analytic, Some(d1), Some(d2)) = (deriv, model.metric_d1(x), model.metric_d2(x)) {
        let g = model.metric(x);
        let ginv = g.try_inverse().ok_or_else(|| GeometryError::NotPositiveDefinite(x.to_vec()))?;
        let mut out = vec![0.0; n * n * n * n];
        for d in 0..n {
            // ∂_d g^{-1} = -g^{-1} (∂_d g) g^{-1}
            let dginv = -(&ginv * &d1[d] * &ginv);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let mut s = 0.0;
                        for e in 0..n {
                            let low = 0.5 * (d1[b][(e, c)] + d1[c][(e, b)] - d1[e][(b, c)]);
                            let dlow = 0.5
                                * (d2[d * n + b][(e, c)] + d2[d * n + c][(e, b)] - d2[d * n + e][(b, c)]);
                            s += dginv[(a, e)] * low + ginv[(a, e)] * dlow;
                        }
                        out[d * n * n * n + (a * n + b) * n + c] = s;
                    }
                }
            }
        }
        return Ok(out);
    }
    let h = match deriv {
        Derivatives::FiniteDifference { h, .. } => h,
        Derivatives::Analytic => 1e-4,
    };
    let mut out = vec![0.0; n * n * n * n];
    for d in 0..n {
        let gp = christoffel(model, &shifted(x, d, h), deriv)?;
        let gm = christoffel(model, &shifted(x, d, -h), deriv)?;
        for i in 0..n * n * n {
            out[d * n * n * n + i] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// Fully covariant Riemann tensor, stored `[((a n + b) n + c) n + d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Riemann {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Riemann {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n.pow(4)] }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d]
    }

    /// Components against vectors `frame[α]` given in chart components.
    pub fn in_frame(&self, frame: &[DVector<f64>]) -> Riemann {
        let n = self.n;
        let m = frame.len();
        // contract one index at a time
        let mut cur = self.data.clone();
        let mut dims = [n, n, n, n];
        for slot in 0..4 {
            let mut next_dims = dims;
            next_dims[slot] = m;
            let size: usize = next_dims.iter().product();
            let mut next = vec![0.0; size];
            let stride = |d: &[usize; 4], s: usize| d[s + 1..].iter().product::<usize>();
            let (so, sn) = (stride(&dims, slot), stride(&next_dims, slot));
            let outer: usize = dims[..slot].iter().product();
            for o in 0..outer {
                for (al, e) in frame.iter().enumerate() {
                    for (k, ek) in e.iter().enumerate() {
                        if *ek == 0.0 {
                            continue;
                        }
                        let src = o * dims[slot] * so + k * so;
                        let dst = o * m * sn + al * sn;
                        for i in 0..so {
                            next[dst + i] += ek * cur[src + i];
                        }
                    }
                }
            }
            cur = next;
            dims = next_dims;
        }
        Riemann { n: m, data: cur }
    }

    /// Largest violation of the algebraic Riemann symmetries.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.get(a, b, c, d);
                        worst = worst
                            .max((r + self.get(b, a, c, d)).abs())
                            .max((r + self.get(a, b, d, c)).abs())
                            .max((r - self.get(c, d, a, b)).abs())
                            .max((r + self.get(a, c, d, b) + self.get(a, d, b, c)).abs());
                    }
                }
            }
        }
        worst
    }
}

fn riemann_single(model: &ManifoldModel, x: &[f64], deriv: Derivatives) -> Result<Riemann> {
    let n = model.dim();
    let gam = christoffel(model, x, deriv)?;
    let dgam = christoffel_d1(model, x, deriv)?;
    let g = model.metric(x);
    let n3 = n * n * n;
    let gi = |a: usize, b: usize, c: usize| gam[(a * n + b) * n + c];
    let dg = |d: usize, a: usize, b: usize, c: usize| dgam[d * n3 + (a * n + b) * n + c];
    let mut up = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut r = dg(c, a, d, b) - dg(d, a, c, b);
                    for e in 0..n {
                        r += gi(a, c, e) * gi(e, d, b) - gi(a, d, e) * gi(e, c, b);
                    }
                    up[((a * n + b) * n + c) * n + d] = r;
                }
            }
        }
    }
    let mut low = Riemann::zeros(n);
    for a in 0..n {
        for e in 0..n {
            let gae = g[(a, e)];
            if gae == 0.0 {
                continue;
            }
            for bcd in 0..n3 {
                low.data[a * n3 + bcd] += gae * up[e * n3 + bcd];
            }
        }
    }
    Ok(low)
}

/// Riemann tensor at a chart point.
pub fn riemann(model: &ManifoldModel, x: &[f64], deriv: Derivatives) -> Result<Riemann> {
    model.check_positive(x)?;
    match deriv {
        Derivatives::FiniteDifference { h, richardson: true } => {
            let coarse = riemann_single(model, x, Derivatives::FiniteDifference { h, richardson: false })?;
            let fine = riemann_single(model, x, Derivatives::FiniteDifference { h: h / 2.0, richardson: false })?;
            let data = coarse.data.iter().zip(&fine.data).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
            Ok(Riemann { n: coarse.n, data })
        }
        _ => riemann_single(model, x, deriv),
    }
}

/// Scalar-curvature summation convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarConvention {
    /// `Σ_{a,b} R_abab` over ordered pairs (the usual scalar curvature).
    FullSum,
    /// Sum over unordered pairs, half the full sum.
    HalfSum,
}

/// Riemann components in an orthonormal frame `(E_0 = γ̇, E_1..E_N)` at one
/// point.
pub fn curvature_at(
    model: &ManifoldModel,
    x: &[f64],
    frame: &[DVector<f64>],
    deriv: Derivatives,
) -> Result<Riemann> {
    Ok(riemann(model, x, deriv)?.in_frame(frame))
}

/// Frame curvature sampled along a closed geodesic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureData {
    pub convention: ScalarConvention,
    pub samples: Vec<Riemann>,
}

impl CurvatureData {
    pub fn big_n(&self) -> usize {
        self.samples[0].n - 1
    }

    /// `R_{0k0l}` with `k, l ∈ 1..=N`.
    pub fn r0k0l(&self, s: usize, k: usize, l: usize) -> f64 {
        self.samples[s].get(0, k, 0, l)
    }

    pub fn r0k0l_matrix(&self, s: usize) -> DMatrix<f64> {
        let nn = self.big_n();
        DMatrix::from_fn(nn, nn, |k, l| self.r0k0l(s, k + 1, l + 1))
    }

    pub fn rikjl(&self, s: usize, i: usize, k: usize, j: usize, l: usize) -> f64 {
        self.samples[s].get(i, k, j, l)
    }

    /// `Ric(γ̇, γ̇) = Σ_j R_{0j0j}`.
    pub fn ricci00(&self, s: usize) -> f64 {
        (1..=self.big_n()).map(|j| self.r0k0l(s, j, j)).sum()
    }

    /// `Σ_{i,j ≥ 1} R_{ijij}`.
    pub fn normal_sum(&self, s: usize) -> f64 {
        let nn = self.big_n();
        let mut t = 0.0;
        for i in 1..=nn {
            for j in 1..=nn {
                t += self.rikjl(s, i, j, i, j);
            }
        }
        t
    }

    /// Scalar curvature under `self.convention`.
    pub fn scalar(&self, s: usize) -> f64 {
        let full = self.normal_sum(s) + 2.0 * self.ricci00(s);
        match self.convention {
            ScalarConvention::FullSum => full,
            ScalarConvention::HalfSum => 0.5 * full,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}
