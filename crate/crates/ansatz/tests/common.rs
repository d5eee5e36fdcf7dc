#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use filament_ansatz::*;
use filament_core::{compute_constants, BubbleConstants, CosineSeries, Dimension, EigenPair};
use filament_geometry::*;
use filament_ode::{PeriodicFunction, VectorPeriodic};
use filament_reduction::*;
use nalgebra::DVector;

pub const N: usize = 8;
pub const M: usize = 64;

pub fn dim() -> Dimension {
    Dimension::new(N).unwrap()
}

pub fn constants() -> &'static (BubbleConstants, EigenPair) {
    static C: OnceLock<(BubbleConstants, EigenPair)> = OnceLock::new();
    C.get_or_init(|| compute_constants(&dim()).unwrap())
}

pub fn torus(bumps: Vec<CosineSeries>) -> ManifoldModel {
    ManifoldModel::new(ModelSpec::PerturbedTorus { n: N, axis_length: 2.0 * PI, side: 8.0, bumps }).unwrap()
}

pub fn flat() -> ManifoldModel {
    torus(vec![CosineSeries { period: 2.0 * PI, coeffs: vec![0.0] }; N - 1])
}

pub fn perturbed() -> ManifoldModel {
    torus((1..N).map(|k| CosineSeries { period: 2.0 * PI, coeffs: vec![0.3 + 0.05 * k as f64, 0.2] }).collect())
}

pub fn metric(model: ManifoldModel) -> Arc<dyn FermiMetric + Send> {
    Arc::new(PerturbedTorusFermi::new(model).unwrap())
}

pub fn axis_curvature(model: &ManifoldModel) -> CurvatureData {
    let mut d = vec![0.0; N];
    d[0] = 1.0;
    let guess = GeodesicGuess { point: vec![0.0; N], direction: d, period: 2.0 * PI };
    let geo = find_closed_geodesic(model, &guess, &GeodesicOptions::default()).unwrap();
    let frame = parallel_frame(model, &geo).unwrap();
    CurvatureData::along(model, &geo, &frame, Derivatives::Analytic, ScalarConvention::FullSum).unwrap()
}

pub fn h_profile(m: usize) -> PeriodicFunction {
    PeriodicFunction::from_fn(2.0 * PI, m, |t| 0.4 + 0.1 * (2.0 * t).cos())
}

pub struct Setup {
    pub curv: CurvatureData,
    pub h: PeriodicFunction,
    pub report: PipelineReport,
}

pub fn perturbed_setup() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| {
        let curv = axis_curvature(&perturbed());
        let h = h_profile(curv.len());
        let report = run_pipeline(&curv, &h, &constants().0, Regime::Subcritical, LogTermModel::Complete).unwrap();
        Setup { curv, h, report }
    })
}

pub fn field(params: AnsatzParams, model: ManifoldModel, h: &PeriodicFunction) -> AnsatzField {
    assemble(params, metric(model), h, &constants().1, dim(), AnsatzOptions::default()).unwrap()
}

pub fn sine_shift(m: usize, amp: f64) -> VectorPeriodic {
    VectorPeriodic::from_fn(2.0 * PI, m, N - 1, |t| {
        let mut v = DVector::zeros(N - 1);
        v[0] = amp * t.sin();
        v
    })
}
