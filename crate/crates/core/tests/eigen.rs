use filament_core::bubble::potential;
use filament_core::{solve_negative_eigenpair, Dimension, GridPolicy};

/// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let qq = if q == 0.0 { 1e-300 } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / qq;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the cell-centred second-order discretization of
/// `Δ + V` on the ball of radius `r`, Dirichlet at `r`, found by bisection.
fn fd_oracle(dim: &Dimension, h: f64, radius: f64) -> f64 {
    let m = (radius / h).round() as usize;
    let nf = dim.nf();
    let rc = |i: usize| (i as f64 + 0.5) * h;
    let face = |i: usize| (i as f64 + 1.0) * h; // face between i and i+1
    let mut d = vec![0.0; m];
    let mut e = vec![0.0; m - 1];
    for i in 0..m {
        let wi = rc(i).powf(nf - 1.0);
        let right = face(i).powf(nf - 1.0);
        let left = if i == 0 { 0.0 } else { face(i - 1).powf(nf - 1.0) };
        d[i] = -(left + right) / (h * h * wi) + potential(dim, rc(i));
        if i + 1 < m {
            e[i] = right / (h * h * (wi * rc(i + 1).powf(nf - 1.0)).sqrt());
        }
    }
    let (mut lo, mut hi) = (0.0, potential(dim, 0.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&d, &e, mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn shooting_matches_matrix_oracle() {
    let dim = Dimension::new(8).unwrap();
    let pair = solve_negative_eigenpair(&dim, &GridPolicy::default()).unwrap();
    let l1 = fd_oracle(&dim, 0.01, 14.0);
    let l2 = fd_oracle(&dim, 0.005, 14.0);
    let l3 = fd_oracle(&dim, 0.0025, 14.0);
    let order = ((l1 - l2) / (l2 - l3)).log2();
    assert!((order - 2.0).abs() < 0.1, "oracle order {order}");
    let extrapolated = l3 + (l3 - l2) / 3.0;
    assert!((pair.lambda1 - l3).abs() < 5e-5 * pair.lambda1, "{} vs {}", pair.lambda1, l3);
    assert!((pair.lambda1 - extrapolated).abs() < 1e-8 * pair.lambda1);
}

#[test]
fn shooting_converges_at_fourth_order() {
    let dim = Dimension::new(8).unwrap();
    let lam = |h: f64| {
        let pol = GridPolicy { h, ..GridPolicy::default() };
        solve_negative_eigenpair(&dim, &pol).unwrap().lambda1
    };
    let (a, b, c) = (lam(0.04), lam(0.02), lam(0.01));
    let order = ((a - b) / (b - c)).log2();
    assert!((order - 4.0).abs() < 0.3, "order {order}");
}

#[test]
fn normalized_positive_and_decaying() {
    for n in [8, 9, 10] {
        let dim = Dimension::new(n).unwrap();
        let pair = solve_negative_eigenpair(&dim, &GridPolicy::default()).unwrap();
        assert!(pair.lambda1 > 0.0 && pair.lambda1 < potential(&dim, 0.0));
        assert!(pair.normalization_error < 1e-8);
        assert!(pair.residual < 1e-8, "residual {}", pair.residual);
        assert!(pair.z0.values.iter().all(|v| *v > 0.0));
        let k = pair.lambda1.sqrt();
        assert!((pair.measured_decay - k).abs() < 0.02 * k);
        // continuation past the grid keeps the same rate
        let rm = pair.z0.r_max();
        let (v, dv) = pair.z0.eval2(rm + 1.0);
        assert!(v > 0.0 && dv < 0.0);
    }
}

#[test]
fn interpolant_is_consistent_with_samples() {
    let dim = Dimension::new(8).unwrap();
    let pair = solve_negative_eigenpair(&dim, &GridPolicy::default()).unwrap();
    let g = &pair.z0;
    for i in [0, 10, 500, 3000] {
        assert!((g.eval(g.node(i)) - g.values[i]).abs() < 1e-14);
    }
    // midpoint against the average of neighbouring Hermite data
    let r = 1.2345;
    let (v, d) = g.eval2(r);
    let h = 1e-5;
    assert!(((g.eval(r + h) - g.eval(r - h)) / (2.0 * h) - d).abs() < 1e-7);
    assert!(v > 0.0);
}
