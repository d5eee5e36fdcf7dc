use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `f(t) = Σ_m c_m cos(2π m t / period)`, the smooth periodic inputs used by
/// models and configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineSeries {
    pub period: f64,
    pub coeffs: Vec<f64>,
}

impl CosineSeries {
    pub fn constant(period: f64, c: f64) -> Self {
        Self { period, coeffs: vec![c] }
    }

    fn freq(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.period
    }

    pub fn value(&self, t: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(m, c)| c * (self.freq(m) * t).cos()).sum()
    }

    pub fn d1(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| -c * self.freq(m) * (self.freq(m) * t).sin())
            .sum()
    }

    pub fn d2(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| -c * self.freq(m).powi(2) * (self.freq(m) * t).cos())
            .sum()
    }

    pub fn min_max(&self, samples: usize) -> (f64, f64) {
        (0..samples).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let v = self.value(self.period * i as f64 / samples as f64);
            (lo.min(v), hi.max(v))
        })
    }

    pub fn sample(&self, m: usize) -> Vec<f64> {
        (0..m).map(|i| self.value(self.period * i as f64 / m as f64)).collect()
    }
}
