use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Ambient dimension `n`, transverse dimension `N = n - 1` and the critical
/// exponent `p = (N+2)/(N-2)` of the transverse problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub n: usize,
    pub big_n: usize,
    pub p: f64,
}

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(CoreError::Dimension(n));
        }
        let big_n = n - 1;
        Ok(Self {
            n,
            big_n,
            p: (big_n as f64 + 2.0) / (big_n as f64 - 2.0),
        })
    }

    /// `N` as a float.
    pub fn nf(&self) -> f64 {
        self.big_n as f64
    }

    /// Scaling weight `(N-2)/2` of the bubble.
    pub fn weight(&self) -> f64 {
        (self.nf() - 2.0) / 2.0
    }

    /// `c_N = [N(N-2)]^{(N-2)/4}`.
    pub fn c_n(&self) -> f64 {
        let nf = self.nf();
        (nf * (nf - 2.0)).powf((nf - 2.0) / 4.0)
    }

    /// Area of the unit sphere in R^N.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.big_n)
    }
}

/// |S^{k-1}| by the two-step recursion, exact for integer `k`.
pub fn sphere_area(k: usize) -> f64 {
    use std::f64::consts::PI;
    let (mut a, mut d) = if k % 2 == 1 { (2.0, 1usize) } else { (2.0 * PI, 2usize) };
    while d < k {
        a *= 2.0 * PI / d as f64;
        d += 2;
    }
    a
}
