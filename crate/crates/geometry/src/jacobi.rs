//! Nondegeneracy of closed geodesics through the twisted Jacobi monodromy.

use filament_core::floquet::{monodromy, monodromy_extrapolated, FloquetReport};
use nalgebra::DMatrix;

use crate::error::{GeometryError, Result};
use crate::frame::NormalFrame;
use crate::geodesic::ClosedGeodesic;
use crate::model::ManifoldModel;
use crate::tensor::{curvature_at, CurvatureData, Derivatives, ScalarConvention};

impl CurvatureData {
    /// Frame curvature at every geodesic sample.
    pub fn along(
        model: &ManifoldModel,
        geo: &ClosedGeodesic,
        frame: &NormalFrame,
        deriv: Derivatives,
        convention: ScalarConvention,
    ) -> Result<Self> {
        let samples = (0..geo.samples())
            .map(|s| curvature_at(model, &geo.positions[s], &frame.full_frame(geo, s), deriv))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { convention, samples })
    }
}

/// Floquet test of `φ̈_k + Σ_l R_{0k0l} φ_l = 0` with the holonomy twist:
/// a Jacobi field is periodic iff `diag(A, A) M` fixes its initial data.
pub fn jacobi_nondegeneracy(geo: &ClosedGeodesic, frame: &NormalFrame, curv: &CurvatureData) -> Result<FloquetReport> {
    let m = curv.len();
    if m != geo.samples() || m % 2 == 1 {
        return Err(GeometryError::Shape(format!("{m} curvature samples for {} geodesic samples", geo.samples())));
    }
    let nn = curv.big_n();
    let h = geo.spacing();
    let p = |t: f64| -> DMatrix<f64> {
        let s = ((t / h).round() as usize) % m;
        -curv.r0k0l_matrix(s)
    };
    // with m divisible by 4 the half-resolution pass still lands on samples
    let mono = if m % 4 == 0 { monodromy_extrapolated(p, nn, geo.period, m / 4) } else { monodromy(p, nn, geo.period, m / 2) };
    let a = &frame.holonomy;
    let mut twist = DMatrix::zeros(2 * nn, 2 * nn);
    twist.view_mut((0, 0), (nn, nn)).copy_from(a);
    twist.view_mut((nn, nn), (nn, nn)).copy_from(a);
    let t = twist * mono;
    if t.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::Shape("Jacobi monodromy overflowed".into()));
    }
    Ok(FloquetReport::from_monodromy(&t))
}
