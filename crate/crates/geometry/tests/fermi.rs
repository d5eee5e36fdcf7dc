mod common;

use common::*;
use filament_geometry::*;
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn chart(model: ManifoldModel, guess: &GeodesicGuess) -> FermiChart {
    let (geo, frame) = build(&model, guess);
    FermiChart::new(model, geo, frame, 3.0)
}

#[test]
fn zero_offset_is_the_geodesic() {
    let c = chart(sphere(), &equator_guess());
    for x0 in [0.0, 0.77, 5.1] {
        let p = c.fermi_map(x0, &[0.0; 7]).unwrap();
        let (q, _) = c.geodesic.state_at(&c.model, x0);
        let d = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 1e-9);
    }
}

#[test]
fn flat_fermi_map_is_affine() {
    let c = chart(flat(), &axis_guess(2.0 * PI));
    let x = [0.3, -0.2, 0.5, 0.1, 0.0, 0.7, -0.4];
    let p = c.fermi_map(1.1, &x).unwrap();
    let (base, _, es) = c.base(1.1);
    for a in 0..N {
        let expect = base[a] + (0..7).map(|i| x[i] * es[i][a]).sum::<f64>();
        assert!((p[a] - expect).abs() < 1e-12);
    }
}

/// Great-circle distance on the sphere factor plus the flat torus part,
/// through the inverse stereographic map.
fn product_distance(p: &[f64], q: &[f64]) -> f64 {
    let lift = |u: &[f64]| -> Vec<f64> {
        let s: f64 = u[..3].iter().map(|v| v * v).sum();
        let d = R * R + s;
        let mut y: Vec<f64> = u[..3].iter().map(|v| 2.0 * R * R * v / d).collect();
        y.push(R * (s - R * R) / d);
        y
    };
    let (a, b) = (lift(p), lift(q));
    let cos = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / (R * R);
    let ds = R * cos.clamp(-1.0, 1.0).acos();
    let dt: f64 = p[3..].iter().zip(&q[3..]).map(|(x, y)| (x - y) * (x - y)).sum();
    (ds * ds + dt).sqrt()
}

#[test]
fn radial_geodesics_realize_distance() {
    let c = chart(sphere(), &equator_guess());
    for x in [
        [0.4, 0.3, -0.2, 0.1, 0.0, 0.0, 0.0],
        [0.0, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.2, -0.5, 0.0, 0.3, 0.1, 0.0, -0.2],
    ] {
        let p = c.fermi_map(0.6, &x).unwrap();
        let (q, _) = c.geodesic.state_at(&c.model, 0.6);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let d = product_distance(&q, &p);
        assert!((d - norm).abs() < 1e-8, "{d} vs {norm}");
    }
}

#[test]
fn pullback_matches_differenced_map() {
    let c = chart(sphere(), &equator_guess());
    let (x0, x) = (0.4, [0.3, -0.2, 0.1, 0.05, 0.0, 0.2, -0.1]);
    let g = c.pullback_metric(x0, &x).unwrap();
    let h = 1e-5;
    let col = |a: usize| -> Vec<f64> {
        let (p, m) = if a == 0 {
            (c.fermi_map(x0 + h, &x).unwrap(), c.fermi_map(x0 - h, &x).unwrap())
        } else {
            let mut xp = x;
            let mut xm = x;
            xp[a - 1] += h;
            xm[a - 1] -= h;
            (c.fermi_map(x0, &xp).unwrap(), c.fermi_map(x0, &xm).unwrap())
        };
        p.iter().zip(&m).map(|(u, v)| (u - v) / (2.0 * h)).collect()
    };
    let jac = DMatrix::from_fn(N, N, |i, a| col(a)[i]);
    let q = c.fermi_map(x0, &x).unwrap();
    let fd = jac.transpose() * c.model.metric(&q) * jac;
    assert!((fd - g).amax() < 1e-7);
}

#[test]
fn expansion_on_flat_torus() {
    let c = chart(flat(), &axis_guess(2.0 * PI));
    let rep = expansion_check(&c, 0.5, 0.05).unwrap();
    assert!(rep.identity_error < 1e-12);
    assert!(rep.first_order_max < 1e-8);
    assert!(rep.quadratic_max < 1e-8);
    assert!(rep.g00_coefficient.is_none());
}

#[test]
fn expansion_on_sphere_product_records_sign() {
    let c = chart(sphere(), &equator_guess());
    let rep = expansion_check(&c, 1.0, 0.05).unwrap();
    assert!(rep.identity_error < 1e-9);
    assert!(rep.first_order_max < 1e-8, "{}", rep.first_order_max);
    let coef = rep.g00_coefficient.unwrap();
    assert_eq!(coef.signum(), EXPANSION_SIGN);
    assert!(rep.g00_relative_mismatch.unwrap() < 0.01, "{rep:?}");
    for (h, r) in rep.g00_hessian.iter().zip(&rep.r0k0l) {
        assert!((h.abs() - 2.0 * r.abs()).abs() <= 0.01 * 2.0 / (R * R));
    }
    assert!((rep.gij_coefficient.unwrap() - EXPANSION_SIGN).abs() < 0.01);
    assert!(rep.gij_relative_mismatch.unwrap() < 0.01);
}

#[test]
fn expansion_first_order_vanishes_on_perturbed_torus() {
    let c = chart(perturbed(), &axis_guess(2.0 * PI));
    let rep = expansion_check(&c, 2.0, 0.05).unwrap();
    assert!(rep.first_order_max < 1e-8);
    assert!(rep.g00_relative_mismatch.unwrap() < 0.01);
}

#[test]
fn numerical_chart_reproduces_closed_form_fermi_metric() {
    let m = perturbed();
    let c = chart(m.clone(), &axis_guess(2.0 * PI));
    let fast = PerturbedTorusFermi::new(m).unwrap();
    for (x0, x) in [(0.3, [0.5, -0.2, 0.1, 0.0, 0.3, -0.4, 0.2]), (4.0, [1.5, 0.0, 0.0, -1.0, 0.0, 0.0, 0.5])] {
        let a = c.pullback_metric(x0, &x).unwrap();
        let b = fast.metric(x0, &x);
        assert!((a - b).amax() < 1e-8);
        // the default numerical Laplacian coefficients agree with the closed form
        let (gi, bb) = fast.laplace_coeffs(x0, &x);
        let chart_only = NumericOnly(&fast);
        let (gi2, bb2) = chart_only.laplace_coeffs(x0, &x);
        assert!((gi - gi2).amax() < 1e-12);
        for (u, v) in bb.iter().zip(&bb2) {
            assert!((u - v).abs() < 1e-7);
        }
    }
}

struct NumericOnly<'a>(&'a PerturbedTorusFermi);

impl FermiMetric for NumericOnly<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn metric(&self, x0: f64, x: &[f64]) -> DMatrix<f64> {
        self.0.metric(x0, x)
    }
}
