#![allow(dead_code)]

use filament_core::numerics::rk4_step;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Fourier spectral second-derivative matrix on `m` (even) nodes of a grid
/// with the given period.
pub fn fourier_d2(m: usize, period: f64) -> DMatrix<f64> {
    assert!(m % 2 == 0);
    let h = 2.0 * PI / m as f64;
    let scale = (2.0 * PI / period).powi(2);
    DMatrix::from_fn(m, m, |j, k| {
        if j == k {
            (-PI * PI / (3.0 * h * h) - 1.0 / 6.0) * scale
        } else {
            let d = j as f64 - k as f64;
            let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            -sign / (2.0 * (d * h / 2.0).sin().powi(2)) * scale
        }
    })
}

/// Periodic multiple shooting for `μ'' = σ(t) μ + s c / μ` with RK4 on
/// 16 segments, Newton on the segment initial data, returning μ at `m`
/// uniform nodes. The guess is the quasi-static balance `√(c/σ)`.
pub fn shooting(sigma: &dyn Fn(f64) -> f64, s: f64, c: f64, period: f64, m: usize) -> Vec<f64> {
    let segs = 16;
    assert!(m % segs == 0);
    let per_node = 64;
    let seg_steps = m / segs * per_node;
    let h = period / (segs * seg_steps) as f64;
    let rhs = |t: f64, y: &[f64]| vec![y[1], sigma(t) * y[0] + s * c / y[0]];
    let run = |j: usize, y0: [f64; 2], nodes: Option<&mut Vec<f64>>| -> [f64; 2] {
        let mut y = y0.to_vec();
        let mut rec = Vec::new();
        for i in 0..seg_steps {
            if i % per_node == 0 {
                rec.push(y[0]);
            }
            y = rk4_step(&rhs, (j * seg_steps + i) as f64 * h, &y, h);
        }
        if let Some(n) = nodes {
            n.extend(rec);
        }
        [y[0], y[1]]
    };
    let defect = |z: &DVector<f64>| -> DVector<f64> {
        let mut d = DVector::zeros(2 * segs);
        for j in 0..segs {
            let e = run(j, [z[2 * j], z[2 * j + 1]], None);
            let nj = (j + 1) % segs;
            d[2 * j] = e[0] - z[2 * nj];
            d[2 * j + 1] = e[1] - z[2 * nj + 1];
        }
        d
    };
    let mut z = DVector::from_fn(2 * segs, |i, _| {
        if i % 2 == 0 { (-s * c / sigma((i / 2 * seg_steps) as f64 * h)).sqrt() } else { 0.0 }
    });
    for _ in 0..40 {
        let f = defect(&z);
        if f.amax() < 1e-13 {
            break;
        }
        let mut jac = DMatrix::zeros(2 * segs, 2 * segs);
        for col in 0..2 * segs {
            let mut zp = z.clone();
            zp[col] += 1e-7;
            jac.set_column(col, &((defect(&zp) - &f) / 1e-7));
        }
        z -= jac.lu().solve(&f).expect("shooting Jacobian invertible");
    }
    let mut nodes = Vec::new();
    for j in 0..segs {
        run(j, [z[2 * j], z[2 * j + 1]], Some(&mut nodes));
    }
    nodes
}
