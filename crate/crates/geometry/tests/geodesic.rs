mod common;

use common::*;
use filament_geometry::*;
use std::f64::consts::PI;

fn check_invariants(geo: &ClosedGeodesic) {
    assert!(geo.closure_position < 1e-8 && geo.closure_velocity < 1e-8, "{} {}", geo.closure_position, geo.closure_velocity);
    assert!(geo.speed_error < 1e-8, "speed {}", geo.speed_error);
    assert!(geo.equation_residual < 1e-8, "residual {}", geo.equation_residual);
}

#[test]
fn flat_axis_line() {
    let m = flat();
    let (geo, frame) = build(&m, &axis_guess(2.0 * PI * 0.97));
    check_invariants(&geo);
    assert!((geo.period - 2.0 * PI).abs() < 1e-10);
    assert!((&frame.holonomy - nalgebra::DMatrix::identity(7, 7)).amax() < 1e-12);
}

#[test]
fn sphere_equator() {
    let m = sphere();
    let (geo, frame) = build(&m, &equator_guess());
    check_invariants(&geo);
    assert!((geo.period - 2.0 * PI * R).abs() < 1e-8, "{}", geo.period);
    let a = &frame.holonomy;
    assert!((a.transpose() * a - nalgebra::DMatrix::identity(7, 7)).amax() < 1e-8);
    assert!(frame.orthonormality_error < 1e-8);
    assert!(frame.transport_residual < 1e-8, "{}", frame.transport_residual);
    assert!(frame.holonomy_relation_error < 1e-8);
}

#[test]
fn perturbed_axis_is_recovered_from_an_offset_guess() {
    let m = perturbed();
    let mut guess = axis_guess(2.0 * PI * 1.03);
    guess.point[1] = 0.002;
    guess.direction[2] = 0.001;
    let (geo, frame) = build(&m, &guess);
    check_invariants(&geo);
    assert!((geo.period - 2.0 * PI).abs() < 1e-8);
    // the orbit found is the axis line (up to the lattice)
    for x in &geo.positions {
        assert!(x[1..].iter().all(|v| v.abs() < 1e-7), "{x:?}");
    }
    assert!(frame.transport_residual < 1e-8);
}

#[test]
fn reversed_transport_inverts_holonomy() {
    for (m, g) in [(sphere(), equator_guess()), (perturbed(), axis_guess(2.0 * PI))] {
        let (geo, frame) = build(&m, &g);
        let rev = reversed_holonomy(&m, &geo, &frame);
        let prod = &frame.holonomy * rev;
        assert!((prod - nalgebra::DMatrix::identity(7, 7)).amax() < 1e-8);
    }
}

#[test]
fn jacobi_verdicts() {
    let flat_rep = {
        let m = flat();
        let (geo, frame) = build(&m, &axis_guess(2.0 * PI));
        let c = CurvatureData::along(&m, &geo, &frame, Derivatives::Analytic, ScalarConvention::FullSum).unwrap();
        jacobi_nondegeneracy(&geo, &frame, &c).unwrap()
    };
    assert!(flat_rep.degenerate);
    let eq = {
        let m = sphere();
        let (geo, frame) = build(&m, &equator_guess());
        let c = CurvatureData::along(&m, &geo, &frame, Derivatives::Analytic, ScalarConvention::FullSum).unwrap();
        jacobi_nondegeneracy(&geo, &frame, &c).unwrap()
    };
    assert!(eq.degenerate, "{eq:?}");
    let pt = {
        let m = perturbed();
        let (geo, frame) = build(&m, &axis_guess(2.0 * PI));
        let c = CurvatureData::along(&m, &geo, &frame, Derivatives::Analytic, ScalarConvention::FullSum).unwrap();
        jacobi_nondegeneracy(&geo, &frame, &c).unwrap()
    };
    assert!(!pt.degenerate);
    assert!(pt.distance_to_one > 0.1, "{pt:?}");
}
