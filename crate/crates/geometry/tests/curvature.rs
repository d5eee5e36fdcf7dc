mod common;

use common::*;
use filament_geometry::*;
use nalgebra::DVector;

fn coordinate_frame(model: &ManifoldModel, x: &[f64]) -> Vec<DVector<f64>> {
    let g = model.metric(x);
    (0..model.dim())
        .map(|a| {
            let mut e = DVector::zeros(model.dim());
            e[a] = 1.0 / g[(a, a)].sqrt();
            e
        })
        .collect()
}

#[test]
fn flat_torus_is_flat() {
    let m = flat();
    let x = [0.3, 1.0, -2.0, 0.5, 0.1, 0.0, 4.0, 2.2];
    for d in [Derivatives::Analytic, Derivatives::FiniteDifference { h: 1e-3, richardson: true }] {
        let r = riemann(&m, &x, d).unwrap();
        assert!(r.data.iter().all(|v| v.abs() < 1e-10));
    }
}

fn sphere_point() -> [f64; 8] {
    [0.4, -0.7, 0.2, 0.0, 1.0, 2.0, 3.0, 0.5]
}

#[test]
fn sphere_closed_forms_from_analytic_derivatives() {
    let m = sphere();
    let x = sphere_point();
    let f = coordinate_frame(&m, &x);
    let r = curvature_at(&m, &x, &f, Derivatives::Analytic).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                assert!((r.get(a, b, a, b) - 1.0 / (R * R)).abs() < 1e-12);
            }
        }
    }
    let full: f64 = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).map(|(a, b)| r.get(a, b, a, b)).sum();
    assert!((full - 6.0 / (R * R)).abs() < 1e-11);
    assert!(r.symmetry_defect() < 1e-12);
}

#[test]
fn finite_differences_converge_at_second_order() {
    let m = sphere();
    let x = sphere_point();
    let f = coordinate_frame(&m, &x);
    let k = 1.0 / (R * R);
    let err = |h: f64| {
        let r = curvature_at(&m, &x, &f, Derivatives::FiniteDifference { h, richardson: false }).unwrap();
        (r.get(0, 1, 0, 1) - k).abs()
    };
    let (e1, e2, e3) = (err(2e-2), err(1e-2), err(5e-3));
    let o1 = (e1 / e2).log2();
    let o2 = (e2 / e3).log2();
    assert!((o1 - 2.0).abs() < 0.1 && (o2 - 2.0).abs() < 0.1, "orders {o1} {o2}");
    let rich = curvature_at(&m, &x, &f, Derivatives::FiniteDifference { h: 1e-2, richardson: true }).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        assert!((rich.get(a, b, a, b) - k).abs() < 1e-6);
    }
    assert!(rich.get(3, 4, 3, 4).abs() < 1e-8);
}

#[test]
fn riemann_symmetries_on_perturbed_torus() {
    let m = perturbed();
    let x = [0.7, 0.3, -0.4, 1.1, 0.2, -0.9, 0.5, 0.05];
    let r = riemann(&m, &x, Derivatives::Analytic).unwrap();
    assert!(r.symmetry_defect() < 1e-10);
    for (i, k, j, l) in [(1, 0, 2, 3), (0, 1, 0, 1), (2, 0, 2, 0)] {
        assert!((r.get(i, k, j, l) + r.get(k, i, j, l)).abs() < 1e-8);
    }
    let fd = riemann(&m, &x, Derivatives::FiniteDifference { h: 1e-2, richardson: true }).unwrap();
    let worst = r.data.iter().zip(&fd.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn perturbed_axis_curvature_is_minus_bump() {
    let m = perturbed();
    let x0 = 1.3;
    let mut x = [0.0; 8];
    x[0] = x0;
    let f = coordinate_frame(&m, &x);
    let r = curvature_at(&m, &x, &f, Derivatives::Analytic).unwrap();
    for k in 1..8 {
        let a = 0.3 + 0.05 * k as f64 + 0.2 * x0.cos();
        assert!((r.get(0, k, 0, k) + a).abs() < 1e-12);
    }
}

#[test]
fn trace_identity_by_direct_summation() {
    let m = perturbed();
    let (geo, frame) = build(&m, &axis_guess(2.0 * std::f64::consts::PI));
    let curv = CurvatureData::along(&m, &geo, &frame, Derivatives::Analytic, ScalarConvention::FullSum).unwrap();
    for s in [0, 17, 300] {
        let r = &curv.samples[s];
        let mut lhs = 0.0;
        for i in 1..8 {
            for j in 1..8 {
                lhs += 2.0 / 3.0 * r.get(i, j, i, j);
            }
            lhs += r.get(0, i, 0, i);
        }
        let mut full = 0.0;
        for a in 0..8 {
            for b in 0..8 {
                full += r.get(a, b, a, b);
            }
        }
        let ric: f64 = (1..8).map(|j| r.get(0, j, 0, j)).sum();
        assert!((lhs - (2.0 / 3.0 * full - ric / 3.0)).abs() < 1e-8);
        assert!((curv.scalar(s) - full).abs() < 1e-12);
        assert!((curv.ricci00(s) - ric).abs() < 1e-12);
    }
}
