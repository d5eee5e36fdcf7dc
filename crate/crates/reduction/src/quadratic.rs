use filament_geometry::{CurvatureData, EXPANSION_SIGN};
use filament_ode::{PeriodicFunction, VectorPeriodic};

use crate::error::{ReductionError, Result};

/// `Q = Σ_j ḋ_j² − ⅓ Σ_{i,k,l} R_{ikil} d_k d_l` with the curvature in the
/// expansion's sign convention.
pub fn quadratic_q(d: &VectorPeriodic, curv: &CurvatureData) -> Result<PeriodicFunction> {
    let nn = curv.big_n();
    if d.len() != curv.len() || d.width() != nn {
        return Err(ReductionError::Grid(format!("shift {}×{} vs curvature {}×{nn}", d.len(), d.width(), curv.len())));
    }
    let dd = d.d1();
    let vals = (0..d.len())
        .map(|s| {
            let v = &d.values[s];
            let mut curvature = 0.0;
            for i in 1..=nn {
                for k in 1..=nn {
                    for l in 1..=nn {
                        curvature += curv.rikjl(s, i, k, i, l) * v[k - 1] * v[l - 1];
                    }
                }
            }
            dd.values[s].norm_squared() - EXPANSION_SIGN * curvature / 3.0
        })
        .collect();
    Ok(PeriodicFunction::new(d.period, vals))
}
