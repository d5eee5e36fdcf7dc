//! Periodic solutions of `−μ̈ + σμ ∓ c/μ = 0` by damped Newton on a
//! sixth-order collocation grid.

use filament_core::floquet::{monodromy_extrapolated, FloquetReport};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{OdeError, Result};
use crate::periodic::{stencil_matrix, PeriodicFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Singularity {
    /// `−μ̈ + σμ − c/μ = 0`, `c > 0`.
    Attractive,
    /// `−μ̈ + σμ + c/μ = 0`, `c > 0`.
    Repulsive,
}

impl Singularity {
    /// Sign in front of `c/μ`.
    pub fn sign(self) -> f64 {
        match self {
            Singularity::Attractive => -1.0,
            Singularity::Repulsive => 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularOdeProblem {
    pub sigma: PeriodicFunction,
    pub c: f64,
    pub kind: Singularity,
    /// Solve even when the sufficient existence condition fails.
    pub override_existence: bool,
}

/// Which sufficient existence condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExistenceWindow {
    PositiveSigma,
    /// `−((k+1)π/2ℓ)² < min σ ≤ max σ < −(kπ/2ℓ)²`.
    NegativeWindow { k: usize },
    Overridden,
}

impl SingularOdeProblem {
    pub fn new(sigma: PeriodicFunction, c: f64, kind: Singularity) -> Self {
        Self { sigma, c, kind, override_existence: false }
    }

    pub fn existence(&self) -> Result<ExistenceWindow> {
        let fail = |msg: String| {
            if self.override_existence {
                Ok(ExistenceWindow::Overridden)
            } else {
                Err(OdeError::ExistenceCondition(msg))
            }
        };
        if self.c <= 0.0 {
            return fail(format!("c = {} must be positive", self.c));
        }
        let (lo, hi) = (self.sigma.min(), self.sigma.max());
        match self.kind {
            Singularity::Attractive => {
                if lo > 0.0 {
                    Ok(ExistenceWindow::PositiveSigma)
                } else {
                    fail(format!("attractive case needs min σ > 0, got {lo}"))
                }
            }
            Singularity::Repulsive => {
                if hi >= 0.0 {
                    return fail(format!("repulsive case needs max σ < 0, got {hi}"));
                }
                let unit = (PI / self.sigma.period).powi(2);
                // largest k with max σ < −k² unit
                let mut k = (-hi / unit).sqrt().floor() as usize;
                if -((k * k) as f64) * unit <= hi {
                    k -= 1;
                }
                if lo > -((k + 1) as f64).powi(2) * unit {
                    Ok(ExistenceWindow::NegativeWindow { k })
                } else {
                    fail(format!(
                        "σ ∈ [{lo}, {hi}] is not inside any window (−((k+1)π/2ℓ)², −(kπ/2ℓ)²)"
                    ))
                }
            }
        }
    }

    fn residual(&self, mu: &DVector<f64>, d2: &DMatrix<f64>) -> DVector<f64> {
        let s = self.kind.sign();
        let mut r = -(d2 * mu);
        for i in 0..mu.len() {
            r[i] += self.sigma.values[i] * mu[i] + s * self.c / mu[i];
        }
        r
    }

    /// Balance value of the constant problem with the mean coefficient.
    pub fn balance_guess(&self) -> f64 {
        (self.c / self.sigma.mean().abs()).sqrt()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularOdeSolution {
    pub mu: PeriodicFunction,
    pub window: ExistenceWindow,
    pub floquet: FloquetReport,
    pub nondegenerate: bool,
    /// Max-norm residual after each Newton step.
    pub history: Vec<f64>,
    pub residual: f64,
}

fn newton(
    problem: &SingularOdeProblem,
    start: DVector<f64>,
    history: &mut Vec<f64>,
) -> Result<DVector<f64>> {
    let m = problem.sigma.len();
    let d2 = stencil_matrix(m, problem.sigma.spacing(), 1.0, 0.0);
    let s = problem.kind.sign();
    let mut mu = start;
    let mut r = problem.residual(&mu, &d2);
    let mut res = r.amax();
    for it in 0..60 {
        if res < 1e-12 * (1.0 + problem.c) {
            return Ok(mu);
        }
        let mut jac = -d2.clone();
        for i in 0..m {
            jac[(i, i)] += problem.sigma.values[i] - s * problem.c / (mu[i] * mu[i]);
        }
        let step = jac.lu().solve(&r).ok_or(OdeError::NewtonFailure { iters: it, residual: res })?;
        // keep min μ above half its current value
        let mut lam: f64 = 1.0;
        for i in 0..m {
            if step[i] > 0.5 * mu[i] {
                lam = lam.min(0.5 * mu[i] / step[i]);
            }
        }
        let mut accepted = false;
        while lam > 1e-6 {
            let trial = &mu - &step * lam;
            let rt = problem.residual(&trial, &d2);
            if rt.amax() < res || rt.amax() < 1e-12 {
                mu = trial;
                r = rt;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if !accepted {
            // rounding floor of the stencil reached
            if res < 1e-10 {
                return Ok(mu);
            }
            return Err(OdeError::NewtonFailure { iters: it, residual: res });
        }
        if mu.iter().any(|v| *v <= 0.0) {
            return Err(OdeError::Positivity);
        }
        res = r.amax();
        history.push(res);
    }
    if res < 1e-10 {
        Ok(mu)
    } else {
        Err(OdeError::NewtonFailure { iters: 60, residual: res })
    }
}

/// Solve the periodic problem; `guess` defaults to the constant balance.
/// When Newton stalls the oscillating part of σ is switched on gradually.
pub fn solve_singular_periodic(
    problem: &SingularOdeProblem,
    guess: Option<&PeriodicFunction>,
) -> Result<SingularOdeSolution> {
    let window = problem.existence()?;
    let m = problem.sigma.len();
    let start = match guess {
        Some(g) => {
            problem.sigma.same_grid(g)?;
            if g.min() <= 0.0 {
                return Err(OdeError::Positivity);
            }
            DVector::from_vec(g.values.clone())
        }
        None => DVector::from_element(m, problem.balance_guess()),
    };
    let mut history = Vec::new();
    let mu = match newton(problem, start.clone(), &mut history) {
        Ok(mu) => mu,
        Err(_) => {
            let mean = problem.sigma.mean();
            let mut mu = start;
            for step in 1..=8 {
                let t = step as f64 / 8.0;
                let partial = SingularOdeProblem {
                    sigma: problem.sigma.map(|v| mean + t * (v - mean)),
                    ..problem.clone()
                };
                mu = newton(&partial, mu, &mut history)?;
            }
            mu
        }
    };
    let mu = PeriodicFunction::new(problem.sigma.period, mu.iter().copied().collect());
    let d2 = stencil_matrix(m, problem.sigma.spacing(), 1.0, 0.0);
    let residual = problem.residual(&DVector::from_vec(mu.values.clone()), &d2).amax();
    let floquet = linearized_nondegeneracy(&mu, problem);
    Ok(SingularOdeSolution { nondegenerate: !floquet.degenerate, mu, window, floquet, history, residual })
}

/// Monodromy of `φ̈ = q φ` with `q` trigonometrically interpolated.
pub fn scalar_monodromy(q: &PeriodicFunction) -> DMatrix<f64> {
    let interp = q.interpolant();
    let steps = 4 * q.len();
    monodromy_extrapolated(|t| DMatrix::from_element(1, 1, interp.eval(t)), 1, q.period, steps)
}

/// Floquet data of the linearization `−φ̈ + (σ ∓ sign·c/μ²) φ = 0`.
pub fn linearized_nondegeneracy(mu: &PeriodicFunction, problem: &SingularOdeProblem) -> FloquetReport {
    let s = problem.kind.sign();
    let q = problem.sigma.zip(mu, |sg, m| sg - s * problem.c / (m * m));
    FloquetReport::from_monodromy(&scalar_monodromy(&q))
}

/// Random low-frequency perturbations of σ within `‖σ' − σ‖∞ ≤ radius`
/// until the problem is nondegenerate. Deterministic in `seed`.
pub fn perturb_to_nondegenerate(
    problem: &SingularOdeProblem,
    radius: f64,
    seed: u64,
    budget: usize,
) -> Result<PeriodicFunction> {
    if let Ok(sol) = solve_singular_periodic(problem, None) {
        if sol.nondegenerate {
            return Ok(problem.sigma.clone());
        }
    }
    let window = problem.existence()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = problem.sigma.period;
    for _ in 0..budget {
        let coeffs: Vec<(f64, f64)> = (0..4).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let bump = PeriodicFunction::from_fn(period, problem.sigma.len(), |t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let w = 2.0 * PI * k as f64 * t / period;
                    a * w.cos() + b * w.sin()
                })
                .sum()
        });
        let scale = radius * rng.random_range(0.5..1.0) / bump.sup();
        let sigma = problem.sigma.zip(&bump, |s, b| s + scale * b);
        let trial = SingularOdeProblem { sigma, ..problem.clone() };
        if trial.existence().ok() != Some(window) {
            continue;
        }
        if let Ok(sol) = solve_singular_periodic(&trial, None) {
            if sol.nondegenerate {
                return Ok(trial.sigma);
            }
        }
    }
    Err(OdeError::RetryBudget(budget))
}

/// Golden-section minimum of `f` on `[lo, hi]`, used to pin down where a
/// one-parameter family becomes degenerate (the distance to 1 has a
/// V-shaped zero there).
pub fn golden_minimum(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}
