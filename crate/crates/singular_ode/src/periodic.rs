//! Uniformly sampled periodic functions and their sixth-order stencils.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{OdeError, Result};

/// Sixth-order central weights for the first derivative, offsets 1..=3.
pub const D1: [f64; 3] = [3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
/// Sixth-order central weights for the second derivative, offsets 0..=3.
pub const D2: [f64; 4] = [-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];
/// Designed convergence order of the collocation schemes.
pub const SCHEME_ORDER: f64 = 6.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFunction {
    pub period: f64,
    pub values: Vec<f64>,
}

impl PeriodicFunction {
    pub fn new(period: f64, values: Vec<f64>) -> Self {
        Self { period, values }
    }

    pub fn from_fn(period: f64, m: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = period / m as f64;
        Self { period, values: (0..m).map(|i| f(i as f64 * h)).collect() }
    }

    pub fn constant(period: f64, m: usize, c: f64) -> Self {
        Self { period, values: vec![c; m] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.len() as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    fn at(&self, i: isize) -> f64 {
        self.values[i.rem_euclid(self.len() as isize) as usize]
    }

    pub fn d1(&self) -> Self {
        let h = self.spacing();
        let values = (0..self.len() as isize)
            .map(|i| (1..=3).map(|k| D1[k - 1] * (self.at(i + k as isize) - self.at(i - k as isize))).sum::<f64>() / h)
            .collect();
        Self { period: self.period, values }
    }

    pub fn d2(&self) -> Self {
        let h = self.spacing();
        let values = (0..self.len() as isize)
            .map(|i| {
                (D2[0] * self.at(i)
                    + (1..=3).map(|k| D2[k] * (self.at(i + k as isize) + self.at(i - k as isize))).sum::<f64>())
                    / (h * h)
            })
            .collect();
        Self { period: self.period, values }
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { period: self.period, values: self.values.iter().map(|v| f(*v)).collect() }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.len(), other.len());
        Self { period: self.period, values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect() }
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() || (self.period - other.period).abs() > 1e-12 * self.period {
            return Err(OdeError::Shape(format!("grids {}/{} vs {}/{}", self.len(), self.period, other.len(), other.period)));
        }
        Ok(())
    }

    /// Trigonometric interpolant through the samples.
    pub fn interpolant(&self) -> TrigInterp {
        TrigInterp::new(self)
    }
}

/// Trigonometric interpolation of periodic samples (exact for band-limited
/// data, spectrally accurate for smooth data).
#[derive(Debug, Clone)]
pub struct TrigInterp {
    period: f64,
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    nyquist: f64,
}

impl TrigInterp {
    pub fn new(f: &PeriodicFunction) -> Self {
        let m = f.len();
        let kmax = (m - 1) / 2;
        let mut cos = vec![0.0; kmax + 1];
        let mut sin = vec![0.0; kmax + 1];
        for k in 1..=kmax {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, v) in f.values.iter().enumerate() {
                let th = 2.0 * PI * (k * j) as f64 / m as f64;
                c += v * th.cos();
                s += v * th.sin();
            }
            cos[k] = 2.0 * c / m as f64;
            sin[k] = 2.0 * s / m as f64;
        }
        let nyquist = if m % 2 == 0 {
            f.values.iter().enumerate().map(|(j, v)| if j % 2 == 0 { *v } else { -*v }).sum::<f64>() / m as f64
        } else {
            0.0
        };
        Self { period: f.period, mean: f.mean(), cos, sin, nyquist }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let w = 2.0 * PI * t / self.period;
        let mut s = self.mean;
        for k in 1..self.cos.len() {
            let (sk, ck) = (k as f64 * w).sin_cos();
            s += self.cos[k] * ck + self.sin[k] * sk;
        }
        if self.nyquist != 0.0 {
            // even sample count: the cos(m/2 · w) mode
            s += self.nyquist * (self.cos.len() as f64 * w).cos();
        }
        s
    }
}

/// Dense periodic sixth-order matrix of `α d²/dt² + β d/dt` on `m` nodes.
pub fn stencil_matrix(m: usize, h: f64, alpha: f64, beta: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        a[(i, i)] += alpha * D2[0] / (h * h);
        for k in 1..=3 {
            let ip = (i + k) % m;
            let im = (i + m - k) % m;
            a[(i, ip)] += alpha * D2[k] / (h * h) + beta * D1[k - 1] / h;
            a[(i, im)] += alpha * D2[k] / (h * h) - beta * D1[k - 1] / h;
        }
    }
    a
}

/// Vector-valued periodic samples with a twist: values at `t + period`
/// equal `twist · values at t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorPeriodic {
    pub period: f64,
    pub values: Vec<DVector<f64>>,
    pub twist: DMatrix<f64>,
}

impl VectorPeriodic {
    pub fn from_fn(period: f64, m: usize, k: usize, f: impl Fn(f64) -> DVector<f64>) -> Self {
        let h = period / m as f64;
        Self { period, values: (0..m).map(|i| f(i as f64 * h)).collect(), twist: DMatrix::identity(k, k) }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn width(&self) -> usize {
        self.twist.nrows()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.len() as f64
    }

    /// Sample `i` continued through the twist for indices outside `0..m`.
    pub fn at(&self, i: isize) -> DVector<f64> {
        let m = self.len() as isize;
        let wraps = i.div_euclid(m);
        let mut v = self.values[i.rem_euclid(m) as usize].clone();
        for _ in 0..wraps.unsigned_abs() {
            v = if wraps > 0 { &self.twist * v } else { self.twist.transpose() * v };
        }
        v
    }

    pub fn d1(&self) -> Self {
        let h = self.spacing();
        let values = (0..self.len() as isize)
            .map(|i| (1..=3).fold(DVector::zeros(self.width()), |acc, k| acc + (self.at(i + k) - self.at(i - k)) * D1[k as usize - 1]) / h)
            .collect();
        Self { period: self.period, values, twist: self.twist.clone() }
    }

    pub fn d2(&self) -> Self {
        let h = self.spacing();
        let values = (0..self.len() as isize)
            .map(|i| {
                (1..=3).fold(self.at(i) * D2[0], |acc, k| acc + (self.at(i + k) + self.at(i - k)) * D2[k as usize])
                    / (h * h)
            })
            .collect();
        Self { period: self.period, values, twist: self.twist.clone() }
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn component(&self, k: usize) -> PeriodicFunction {
        PeriodicFunction::new(self.period, self.values.iter().map(|v| v[k]).collect())
    }
}
