#![allow(dead_code)]

use filament_core::CosineSeries;
use filament_geometry::*;
use std::f64::consts::PI;

pub const N: usize = 8;

pub fn flat() -> ManifoldModel {
    ManifoldModel::flat_torus(N, 2.0 * PI)
}

pub const R: f64 = 1.3;

pub fn sphere() -> ManifoldModel {
    ManifoldModel::new(ModelSpec::SphereProduct {
        n: N,
        sphere_dim: 3,
        radius: R,
        torus_lengths: vec![2.0 * PI; N - 3],
    })
    .unwrap()
}

pub fn perturbed() -> ManifoldModel {
    let bumps = (1..N)
        .map(|k| CosineSeries { period: 2.0 * PI, coeffs: vec![0.3 + 0.05 * k as f64, 0.2] })
        .collect();
    ManifoldModel::new(ModelSpec::PerturbedTorus { n: N, axis_length: 2.0 * PI, side: 8.0, bumps }).unwrap()
}

pub fn axis_guess(period: f64) -> GeodesicGuess {
    let mut d = vec![0.0; N];
    d[0] = 1.0;
    GeodesicGuess { point: vec![0.0; N], direction: d, period }
}

pub fn equator_guess() -> GeodesicGuess {
    let mut p = vec![0.0; N];
    p[0] = R;
    let mut d = vec![0.0; N];
    d[1] = 1.0;
    GeodesicGuess { point: p, direction: d, period: 2.0 * PI * R * 1.02 }
}

pub fn build(model: &ManifoldModel, guess: &GeodesicGuess) -> (ClosedGeodesic, NormalFrame) {
    let geo = find_closed_geodesic(model, guess, &GeodesicOptions::default()).unwrap();
    let frame = parallel_frame(model, &geo).unwrap();
    (geo, frame)
}
