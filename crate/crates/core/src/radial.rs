use serde::{Deserialize, Serialize};

/// Uniform radial samples of a profile and its derivative on `[0, r_max]`.
///
/// Interpolation is cubic Hermite; for a profile with bounded fourth
/// derivative the error is at most `h^4 max|f''''| / 384`. Past `r_max` the
/// profile is continued by `r^{-power} e^{-rate r}` matched at `r_max`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialGrid {
    pub h: f64,
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub decay_rate: f64,
    pub decay_power: f64,
}

impl RadialGrid {
    pub fn r_max(&self) -> f64 {
        self.h * (self.values.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.h * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.node(i)).collect()
    }

    fn tail(&self, r: f64) -> (f64, f64) {
        let rm = self.r_max();
        let v = *self.values.last().unwrap();
        let f = (rm / r).powf(self.decay_power) * (-self.decay_rate * (r - rm)).exp();
        (v * f, v * f * (-self.decay_power / r - self.decay_rate))
    }

    /// Value and derivative at `r ≥ 0`.
    pub fn eval2(&self, r: f64) -> (f64, f64) {
        let last = self.values.len() - 1;
        if r >= self.r_max() {
            return self.tail(r);
        }
        let s = r / self.h;
        let i = (s.floor() as usize).min(last - 1);
        let t = s - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.derivs[i] * self.h, self.derivs[i + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        let dv = (6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * d1;
        (v, dv / self.h)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.eval2(r).0
    }
}
