//! Monodromy of periodic second-order linear systems and the Floquet
//! degeneracy test shared by the geodesic and ODE layers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Monodromy of `φ̈ = P(t) φ` over `[0, period]`, as the `2k × 2k` map on
/// `(φ, φ̇)`, by RK4 with `steps` steps. `P` is only evaluated at multiples
/// of half a step, so sampled coefficients on a grid of spacing
/// `period / (2 steps)` are used exactly.
pub fn monodromy<F>(p: F, k: usize, period: f64, steps: usize) -> DMatrix<f64>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let h = period / steps as f64;
    let mut y = DMatrix::<f64>::identity(2 * k, 2 * k);
    let rhs = |pm: &DMatrix<f64>, y: &DMatrix<f64>| -> DMatrix<f64> {
        let mut out = DMatrix::zeros(2 * k, 2 * k);
        out.rows_mut(0, k).copy_from(&y.rows(k, k));
        out.rows_mut(k, k).copy_from(&(pm * y.rows(0, k)));
        out
    };
    let mut p0 = p(0.0);
    for s in 0..steps {
        let t = s as f64 * h;
        let pm = p(t + 0.5 * h);
        let p1 = p(t + h);
        let k1 = rhs(&p0, &y);
        let k2 = rhs(&pm, &(&y + &k1 * (0.5 * h)));
        let k3 = rhs(&pm, &(&y + &k2 * (0.5 * h)));
        let k4 = rhs(&p1, &(&y + &k3 * h));
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        p0 = p1;
    }
    y
}

/// Richardson combination of [`monodromy`] at `steps` and `2 steps`, which
/// removes the leading `h⁴` error term.
pub fn monodromy_extrapolated<F>(p: F, k: usize, period: f64, steps: usize) -> DMatrix<f64>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let coarse = monodromy(&p, k, period, steps);
    let fine = monodromy(&p, k, period, 2 * steps);
    (fine * 16.0 - coarse) / 15.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetReport {
    /// Eigenvalues of the (twisted) monodromy as `(re, im)` pairs.
    pub multipliers: Vec<(f64, f64)>,
    /// Smallest singular value of `T − I`.
    pub distance_to_one: f64,
    /// `1e-8 · √cond(T)`. For a symplectic `T` this is `1e-8 · ‖T‖`, the
    /// scale at which rounding in `T − I` lives.
    pub threshold: f64,
    pub degenerate: bool,
}

impl FloquetReport {
    pub fn from_monodromy(t: &DMatrix<f64>) -> Self {
        let m = t.nrows();
        let sv = t.clone().singular_values();
        let cond = sv.max() / sv.min().max(f64::MIN_POSITIVE);
        let distance_to_one = (t - DMatrix::identity(m, m)).singular_values().min();
        let threshold = 1e-8 * cond.sqrt().max(1.0);
        let multipliers = t.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
        Self { multipliers, distance_to_one, threshold, degenerate: distance_to_one <= threshold }
    }
}
