use std::sync::Arc;

use filament_ansatz::{assemble, scaling_sweep, AnsatzOptions, Channel, ResidualReport, SlopeFit, SweepConfig};
use filament_core::floquet::FloquetReport;
use filament_core::{compute_constants, BubbleConstants, ClosedForms, EigenPair};
use filament_geometry::{
    expansion_check, find_closed_geodesic, jacobi_nondegeneracy, parallel_frame, ClosedGeodesic, CurvatureData,
    Derivatives, ExpansionReport, FermiChart, GeodesicOptions, ManifoldModel, ModelSpec, NormalFrame,
    PerturbedTorusFermi, ScalarConvention,
};
use filament_ode::{
    gap_check, solve_singular_periodic, GapReport, PeriodicFunction, SingularOdeProblem, SingularOdeSolution,
    VectorPeriodic,
};
use filament_reduction::{run_pipeline, AnsatzParams, PipelineReport};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ModelConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::report::CommandOutput;

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub name: String,
    pub quadrature: f64,
    pub closed_form: f64,
    pub difference: f64,
    /// Part of the acceptance set.
    pub checked: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ConstantsBody {
    pub n: usize,
    pub constants: BubbleConstants,
    pub comparisons: Vec<Comparison>,
    /// `|A_1 − A_1'|` between the two integral expressions.
    pub a1_identity: f64,
    pub sign_violations: Vec<&'static str>,
}

pub fn cmd_constants(cfg: &RunConfig) -> Result<CommandOutput> {
    let dim = cfg.validate()?;
    let (c, _) = compute_constants(&dim)?;
    let cf = ClosedForms::new(&dim)?;
    let tol = cfg.tolerances.constants;
    let row = |name: &str, q: f64, f: f64, checked: bool| {
        let difference = (q - f).abs();
        Comparison { name: name.into(), quadrature: q, closed_form: f, difference, checked, passed: difference <= tol }
    };
    let comparisons = vec![
        row("a_n", c.a_n, cf.a_n, true),
        row("b_n", c.b_n, cf.b_n, true),
        row("B2/A2", c.b2 / c.a2, cf.b2_over_a2, true),
        row("A1", c.a1, cf.a1, false),
        row("A2", c.a2, cf.a2, false),
        row("B2", c.b2, cf.b2, false),
        row("B3", c.b3, cf.b3, false),
    ];
    let summary = comparisons
        .iter()
        .map(|r| {
            format!(
                "{:<6} quadrature {:>22.15e}  closed form {:>22.15e}  diff {:.2e}  {}",
                r.name,
                r.quadrature,
                r.closed_form,
                r.difference,
                if r.passed { "ok" } else { "MISMATCH" }
            )
        })
        .collect();
    let failures = comparisons
        .iter()
        .filter(|r| r.checked && !r.passed)
        .map(|r| format!("{} differs from its closed form by {:.3e}", r.name, r.difference))
        .collect();
    let body = ConstantsBody {
        n: dim.n,
        a1_identity: (c.a1 - c.a1_alt).abs(),
        sign_violations: c.sign_violations(),
        constants: c,
        comparisons,
    };
    CommandOutput::new("constants", cfg, body, summary, failures)
}

pub struct Curve {
    pub model: ManifoldModel,
    pub geodesic: ClosedGeodesic,
    pub frame: NormalFrame,
    pub curvature: CurvatureData,
}

pub fn build_curve(cfg: &RunConfig) -> Result<Curve> {
    let model = cfg.model.manifold(cfg.n)?;
    let geodesic = find_closed_geodesic(&model, &cfg.model.guess(cfg.n), &GeodesicOptions::default())?;
    let frame = parallel_frame(&model, &geodesic)?;
    let curvature = CurvatureData::along(&model, &geodesic, &frame, Derivatives::Analytic, ScalarConvention::FullSum)?;
    Ok(Curve { model, geodesic, frame, curvature })
}

#[derive(Debug, Serialize)]
pub struct GeodesicSummary {
    pub period: f64,
    pub samples: usize,
    pub closure_position: f64,
    pub closure_velocity: f64,
    pub speed_error: f64,
    pub equation_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct FrameSummary {
    pub holonomy: DMatrix<f64>,
    pub orthonormality_error: f64,
    pub transport_residual: f64,
    pub holonomy_relation_error: f64,
}

#[derive(Debug, Serialize)]
pub struct CurvatureTable {
    /// Sorted spectrum of `R_{0k0l}` at the first sample.
    pub r0k0l_spectrum: Vec<f64>,
    pub closed_form_spectrum: Vec<f64>,
    /// Largest spectrum mismatch over all samples.
    pub max_error: f64,
}

#[derive(Debug, Serialize)]
pub struct GeodesicBody {
    pub model: ModelSpec,
    pub geodesic: GeodesicSummary,
    pub frame: FrameSummary,
    pub curvature: CurvatureTable,
    pub jacobi: FloquetReport,
    pub verdict: &'static str,
    /// Distance of the twisted monodromy spectrum from 1.
    pub spectral_gap: f64,
    pub expansion: Vec<ExpansionReport>,
}

fn sorted_spectrum(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Closed-form spectrum of `R_{0k0l}` at arclength `t`.
fn closed_form_spectrum(model: &ModelConfig, n: usize, t: f64) -> Vec<f64> {
    let big_n = n - 1;
    let mut v = match model {
        ModelConfig::FlatTorus { .. } => vec![0.0; big_n],
        ModelConfig::SphereProduct { sphere_dim, radius, .. } => {
            let mut v = vec![0.0; big_n];
            for x in v.iter_mut().take(sphere_dim - 1) {
                *x = 1.0 / (radius * radius);
            }
            v
        }
        // on the axis R_{0k0k} = −a_k(x_0)
        ModelConfig::PerturbedTorus { axis_length, .. } => match cfg_bumps(model, n) {
            Some(b) => b.iter().map(|s| -filament_core::CosineSeries { period: *axis_length, coeffs: s.clone() }.value(t)).collect(),
            None => vec![f64::NAN; big_n],
        },
    };
    v.sort_by(f64::total_cmp);
    v
}

fn cfg_bumps(model: &ModelConfig, n: usize) -> Option<Vec<Vec<f64>>> {
    match model {
        ModelConfig::PerturbedTorus { bumps, .. } if bumps.len() == 1 => Some(vec![bumps[0].clone(); n - 1]),
        ModelConfig::PerturbedTorus { bumps, .. } => Some(bumps.clone()),
        _ => None,
    }
}

pub fn cmd_geodesic(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let curve = build_curve(cfg)?;
    let geo = &curve.geodesic;
    let jacobi = jacobi_nondegeneracy(geo, &curve.frame, &curve.curvature)?;
    let m = curve.curvature.len();
    let mut max_error: f64 = 0.0;
    for s in 0..m {
        let got = sorted_spectrum(curve.curvature.r0k0l_matrix(s));
        let want = closed_form_spectrum(&cfg.model, cfg.n, geo.period * s as f64 / m as f64);
        for (a, b) in got.iter().zip(&want) {
            max_error = max_error.max((a - b).abs());
        }
    }
    let curvature = CurvatureTable {
        r0k0l_spectrum: sorted_spectrum(curve.curvature.r0k0l_matrix(0)),
        closed_form_spectrum: closed_form_spectrum(&cfg.model, cfg.n, 0.0),
        max_error,
    };
    let chart = FermiChart::new(curve.model.clone(), geo.clone(), curve.frame.clone(), 3.0);
    let expansion = [0.0, geo.period / 3.0, 2.0 * geo.period / 3.0]
        .iter()
        .map(|&x0| expansion_check(&chart, x0, 0.05))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let verdict = if jacobi.degenerate { "degenerate" } else { "nondegenerate" };
    let summary = vec![
        format!(
            "geodesic: period {:.12}, closure {:.2e}/{:.2e}, equation residual {:.2e}",
            geo.period, geo.closure_position, geo.closure_velocity, geo.equation_residual
        ),
        format!("jacobi: {verdict}, spectral gap {:.6e} (threshold {:.2e})", jacobi.distance_to_one, jacobi.threshold),
        format!("curvature: R_0k0l spectrum max error vs closed form {max_error:.2e}"),
    ];
    let body = GeodesicBody {
        model: curve.model.spec.clone(),
        geodesic: GeodesicSummary {
            period: geo.period,
            samples: geo.samples(),
            closure_position: geo.closure_position,
            closure_velocity: geo.closure_velocity,
            speed_error: geo.speed_error,
            equation_residual: geo.equation_residual,
        },
        frame: FrameSummary {
            holonomy: curve.frame.holonomy.clone(),
            orthonormality_error: curve.frame.orthonormality_error,
            transport_residual: curve.frame.transport_residual,
            holonomy_relation_error: curve.frame.holonomy_relation_error,
        },
        curvature,
        spectral_gap: jacobi.distance_to_one,
        verdict,
        jacobi,
        expansion,
    };
    CommandOutput::new("geodesic", cfg, body, summary, Vec::new())
}

pub struct Reduction {
    pub curve: Curve,
    pub h: PeriodicFunction,
    pub constants: BubbleConstants,
    pub pair: EigenPair,
    pub pipeline: PipelineReport,
}

pub fn reduce(cfg: &RunConfig) -> Result<Reduction> {
    let dim = cfg.validate()?;
    let curve = build_curve(cfg)?;
    let h = cfg.h_on(curve.geodesic.period, curve.curvature.len());
    let (constants, pair) = compute_constants(&dim)?;
    let pipeline = run_pipeline(&curve.curvature, &h, &constants, cfg.regime, cfg.log_terms)?;
    Ok(Reduction { curve, h, constants, pair, pipeline })
}

#[derive(Debug, Serialize)]
pub struct ReduceBody {
    pub pipeline: PipelineReport,
    pub gap: Vec<GapReport>,
}

pub fn cmd_reduce(cfg: &RunConfig) -> Result<CommandOutput> {
    let r = reduce(cfg)?;
    let p = &r.pipeline;
    let tol = &cfg.tolerances;
    let gap: Vec<GapReport> =
        cfg.eps.par_iter().map(|&e| gap_check(e, &p.a0, r.constants.lambda1, tol.gap_nu)).collect();
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    check(p.mu0.residual <= tol.ode, format!("μ0 residual {:.3e}", p.mu0.residual));
    check(p.mu1.residual <= tol.ode, format!("μ1 residual {:.3e}", p.mu1.residual));
    check(p.brackets.max() <= tol.bracket, format!("bracket residual {:.3e}", p.brackets.max()));
    check(
        p.coefficient_consistency <= tol.bracket,
        format!("a_n σ − g1/B3 = {:.3e}", p.coefficient_consistency),
    );
    let mut summary = vec![
        format!(
            "μ0 ∈ [{:.10}, {:.10}], residual {:.2e}, {}",
            p.mu0.mu.min(),
            p.mu0.mu.max(),
            p.mu0.residual,
            if p.mu0.nondegenerate { "nondegenerate" } else { "degenerate" }
        ),
        format!("e0 ∈ [{:.6}, {:.6}], e1 ∈ [{:.6}, {:.6}]", p.e0.min(), p.e0.max(), p.e1.min(), p.e1.max()),
        format!("brackets (relative) {:.2e}, κ = {:.6}", p.brackets.max(), p.kappa),
    ];
    for g in &gap {
        summary.push(format!(
            "ε = {:<8e} gap {} violating k {:?} near monodromy resonance {}",
            g.eps,
            if g.holds { "holds" } else { "FAILS" },
            g.violating,
            g.near_monodromy_resonance
        ));
    }
    let body = ReduceBody { pipeline: r.pipeline, gap };
    CommandOutput::new("reduce", cfg, body, summary, failures)
}

#[derive(Debug, Serialize)]
pub struct ResidualBody {
    pub mode: &'static str,
    /// Constant μ of the generic run.
    pub generic_mu: Option<f64>,
    pub radial: ResidualReport,
    pub translation: Option<ResidualReport>,
}

fn slope_line(prefix: &str, f: &SlopeFit) -> String {
    format!(
        "{prefix} {:<9} slope {:.4} ± {:.4}  CI [{:.4}, {:.4}]  over {} ε values",
        f.channel,
        f.slope,
        f.stderr,
        f.ci.0,
        f.ci.1,
        f.eps_used.len()
    )
}

/// `generic`: `None` for pipeline parameters, `Some(None)` for the default
/// generic μ (half the mean of μ0), `Some(Some(μ))` for an explicit one.
pub fn cmd_residual(cfg: &RunConfig, generic: Option<Option<f64>>) -> Result<CommandOutput> {
    let seed = cfg.seed()?;
    let fermi = cfg
        .model
        .closed_form_fermi(cfg.n)
        .and_then(PerturbedTorusFermi::new)
        .ok_or_else(|| CliError::Condition("residual needs a closed-form Fermi metric (flat or perturbed torus)".into()))?;
    let r = reduce(cfg)?;
    let dim = r.constants.dim;
    let m = r.curve.curvature.len();
    let period = r.curve.geodesic.period;
    let generic = generic.or(cfg.residual.generic_mu.map(Some));
    let generic_mu = generic.map(|g| g.unwrap_or(0.5 * r.pipeline.mu0.mu.mean()));
    let eps0 = cfg.eps[0];
    let params = match generic_mu {
        Some(mu) => AnsatzParams::generic(period, m, dim.big_n, mu, eps0, cfg.regime),
        None => r.pipeline.params(eps0),
    };
    let metric = Arc::new(fermi);
    let field = assemble(params.clone(), metric.clone(), &r.h, &r.pair, dim, AnsatzOptions::default())?;
    let sweep = |channels: Vec<Channel>, x0: f64| SweepConfig { eps: cfg.eps.clone(), channels, x0, budget: cfg.budget, seed };
    let radial = scaling_sweep(&field, &sweep(vec![Channel::Z0, Channel::Dilation], cfg.residual.x0))?;
    let translation = if generic_mu.is_none() && cfg.residual.shift_amplitude != 0.0 {
        let amp = cfg.residual.shift_amplitude;
        let d = VectorPeriodic::from_fn(period, m, dim.big_n, |t| {
            let mut v = DVector::zeros(dim.big_n);
            v[0] = amp * (2.0 * std::f64::consts::PI * t / period).sin();
            v
        });
        let shifted = assemble(params.with_shift(d), metric, &r.h, &r.pair, dim, AnsatzOptions::default())?;
        Some(scaling_sweep(&shifted, &sweep(vec![Channel::Translation(1)], cfg.residual.shift_x0))?)
    } else {
        None
    };
    let mode = if generic_mu.is_some() { "generic" } else { "pipeline" };
    let mut summary = Vec::new();
    for f in radial.fits.iter().chain([&radial.pointwise_fit]) {
        summary.push(slope_line(mode, f));
    }
    let mut csv = radial.to_csv();
    if let Some(t) = &translation {
        summary.push(slope_line("shifted", &t.fits[0]));
        csv.push_str(t.to_csv().split_once('\n').map(|x| x.1).unwrap_or(""));
    }
    let body = ResidualBody { mode, generic_mu, radial, translation };
    let mut out = CommandOutput::new("residual", cfg, body, summary, Vec::new())?;
    out.csv = Some(csv);
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct OdeBody {
    pub problem: SingularOdeProblem,
    pub solution: SingularOdeSolution,
}

pub fn cmd_ode(cfg: &RunConfig) -> Result<CommandOutput> {
    let o = &cfg.ode;
    if o.samples < 8 || !(o.period > 0.0) || o.sigma.is_empty() {
        return Err(CliError::Config("ode needs ≥ 8 samples, a positive period and σ coefficients".into()));
    }
    let series = filament_core::CosineSeries { period: o.period, coeffs: o.sigma.clone() };
    let sigma = PeriodicFunction::new(o.period, series.sample(o.samples));
    let kind = o.singularity.unwrap_or(cfg.regime.singularity());
    let problem = SingularOdeProblem::new(sigma, o.c, kind);
    let solution = solve_singular_periodic(&problem, None)?;
    let mut failures = Vec::new();
    if solution.residual > cfg.tolerances.ode {
        failures.push(format!("collocation residual {:.3e}", solution.residual));
    }
    let summary = vec![format!(
        "μ ∈ [{:.12}, {:.12}], residual {:.2e}, window {:?}, {}",
        solution.mu.min(),
        solution.mu.max(),
        solution.residual,
        solution.window,
        if solution.nondegenerate { "nondegenerate" } else { "degenerate" }
    )];
    CommandOutput::new("ode", cfg, OdeBody { problem, solution }, summary, failures)
}
