#![allow(dead_code)]

use filament_core::{compute_constants, BubbleConstants, ClosedForms, CosineSeries, Dimension};
use filament_geometry::*;
use filament_ode::PeriodicFunction;
use std::f64::consts::PI;
use std::sync::OnceLock;

pub const N: usize = 8;
pub const R: f64 = 1.3;

pub fn constants() -> BubbleConstants {
    static C: OnceLock<BubbleConstants> = OnceLock::new();
    C.get_or_init(|| compute_constants(&Dimension::new(N).unwrap()).unwrap().0).clone()
}

/// Quadrature constants with `a_n` and `B_2/A_2` replaced by their closed forms.
pub fn closed_form_constants() -> BubbleConstants {
    let mut c = constants();
    let cf = ClosedForms::new(&c.dim).unwrap();
    c.a_n = cf.a_n;
    c.b2 = cf.b2_over_a2 * c.a2;
    c
}

pub fn flat_curvature(m: usize) -> CurvatureData {
    CurvatureData { convention: ScalarConvention::FullSum, samples: vec![Riemann::zeros(N); m] }
}

pub fn bumps() -> Vec<CosineSeries> {
    (1..N).map(|k| CosineSeries { period: 2.0 * PI, coeffs: vec![0.3 + 0.05 * k as f64, 0.2] }).collect()
}

pub fn perturbed() -> ManifoldModel {
    ManifoldModel::new(ModelSpec::PerturbedTorus { n: N, axis_length: 2.0 * PI, side: 8.0, bumps: bumps() }).unwrap()
}

pub fn sphere() -> ManifoldModel {
    ManifoldModel::new(ModelSpec::SphereProduct { n: N, sphere_dim: 4, radius: R, torus_lengths: vec![2.0 * PI; N - 4] })
        .unwrap()
}

pub fn along(model: &ManifoldModel, guess: &GeodesicGuess, convention: ScalarConvention) -> (ClosedGeodesic, CurvatureData) {
    let geo = find_closed_geodesic(model, guess, &GeodesicOptions::default()).unwrap();
    let frame = parallel_frame(model, &geo).unwrap();
    let curv = CurvatureData::along(model, &geo, &frame, Derivatives::Analytic, convention).unwrap();
    (geo, curv)
}

pub fn axis_guess() -> GeodesicGuess {
    let mut d = vec![0.0; N];
    d[0] = 1.0;
    GeodesicGuess { point: vec![0.0; N], direction: d, period: 2.0 * PI }
}

pub fn equator_guess() -> GeodesicGuess {
    let mut p = vec![0.0; N];
    p[0] = R;
    let mut d = vec![0.0; N];
    d[1] = 1.0;
    GeodesicGuess { point: p, direction: d, period: 2.0 * PI * R }
}

pub fn cosine(m: usize, c0: f64, c1: f64) -> PeriodicFunction {
    PeriodicFunction::from_fn(2.0 * PI, m, |t| c0 + c1 * t.cos())
}
