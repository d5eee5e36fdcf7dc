//! TOML run configuration. Every physical input is a finite cosine series,
//! so periodicity is exact.

use std::f64::consts::PI;
use std::path::PathBuf;

use filament_core::{CosineSeries, Dimension};
use filament_geometry::{GeodesicGuess, ManifoldModel, ModelSpec};
use filament_ode::{PeriodicFunction, Singularity};
use filament_reduction::{LogTermModel, Regime};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Cube torus of side `length`; the geodesic is the `x_0` axis line.
    FlatTorus { length: f64 },
    /// `S^d(radius) × T^{n−d}`; the geodesic is an equator of the sphere.
    SphereProduct { sphere_dim: usize, radius: f64, torus_length: f64 },
    /// Flat torus with `g_00 = 1 + Σ a_k(x_0) s_k(x_k)²`; `bumps[k]` holds
    /// the cosine coefficients of `a_{k+1}`. A single entry is used for
    /// every normal direction.
    PerturbedTorus { axis_length: f64, side: f64, bumps: Vec<Vec<f64>> },
}

impl ModelConfig {
    /// Built-in model for dimension `n`.
    pub fn preset(name: &str, n: usize) -> Result<Self> {
        match name {
            "flat" | "flat-torus" => Ok(ModelConfig::FlatTorus { length: 2.0 * PI }),
            "sphere" | "sphere-product" => {
                Ok(ModelConfig::SphereProduct { sphere_dim: 4, radius: 1.3, torus_length: 2.0 * PI })
            }
            "perturbed" | "perturbed-torus" => Ok(ModelConfig::PerturbedTorus {
                axis_length: 2.0 * PI,
                side: 8.0,
                bumps: (1..n.max(2)).map(|k| vec![0.3 + 0.05 * k as f64, 0.2]).collect(),
            }),
            _ => Err(CliError::Config(format!("unknown model preset {name:?} (flat, sphere, perturbed)"))),
        }
    }

    pub fn spec(&self, n: usize) -> Result<ModelSpec> {
        Ok(match self {
            ModelConfig::FlatTorus { length } => ModelSpec::FlatTorus { n, lengths: vec![*length; n] },
            ModelConfig::SphereProduct { sphere_dim, radius, torus_length } => ModelSpec::SphereProduct {
                n,
                sphere_dim: *sphere_dim,
                radius: *radius,
                torus_lengths: vec![*torus_length; n.saturating_sub(*sphere_dim)],
            },
            ModelConfig::PerturbedTorus { axis_length, side, bumps } => {
                let series = |c: &Vec<f64>| CosineSeries { period: *axis_length, coeffs: c.clone() };
                let bumps = match bumps.len() {
                    1 => vec![series(&bumps[0]); n - 1],
                    k if k == n - 1 => bumps.iter().map(series).collect(),
                    k => return Err(CliError::Config(format!("{k} bump series for n = {n}, need 1 or {}", n - 1))),
                };
                ModelSpec::PerturbedTorus { n, axis_length: *axis_length, side: *side, bumps }
            }
        })
    }

    pub fn manifold(&self, n: usize) -> Result<ManifoldModel> {
        Ok(ManifoldModel::new(self.spec(n)?)?)
    }

    /// Starting guess for the closed geodesic.
    pub fn guess(&self, n: usize) -> GeodesicGuess {
        let mut point = vec![0.0; n];
        let mut direction = vec![0.0; n];
        match self {
            ModelConfig::FlatTorus { length } => {
                direction[0] = 1.0;
                GeodesicGuess { point, direction, period: *length }
            }
            ModelConfig::SphereProduct { radius, .. } => {
                point[0] = *radius;
                direction[1] = 1.0;
                GeodesicGuess { point, direction, period: 2.0 * PI * radius }
            }
            ModelConfig::PerturbedTorus { axis_length, .. } => {
                direction[0] = 1.0;
                GeodesicGuess { point, direction, period: *axis_length }
            }
        }
    }

    /// Perturbed-torus form of the model when its Fermi metric is known in
    /// closed form (the flat torus is the unperturbed case).
    pub fn closed_form_fermi(&self, n: usize) -> Option<ManifoldModel> {
        let spec = match self {
            ModelConfig::FlatTorus { length } => ModelSpec::PerturbedTorus {
                n,
                axis_length: *length,
                side: *length,
                bumps: vec![CosineSeries::constant(*length, 0.0); n - 1],
            },
            ModelConfig::PerturbedTorus { .. } => self.spec(n).ok()?,
            ModelConfig::SphereProduct { .. } => return None,
        };
        ManifoldModel::new(spec).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Quadrature constants against closed forms.
    pub constants: f64,
    /// Max-norm collocation residuals.
    pub ode: f64,
    /// Relative size of the vanishing brackets.
    pub bracket: f64,
    /// `ν` of the gap condition.
    pub gap_nu: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { constants: 1e-8, ode: 1e-10, bracket: 1e-9, gap_nu: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResidualConfig {
    /// Slice of the radial channels.
    pub x0: f64,
    /// Slice of the translation run.
    pub shift_x0: f64,
    /// `d = amplitude · sin(x_0) E_1`; zero skips the translation run.
    pub shift_amplitude: f64,
    /// Constant μ for the generic run; `None` uses pipeline parameters.
    pub generic_mu: Option<f64>,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        Self { x0: 1.0, shift_x0: PI / 2.0, shift_amplitude: 1.0, generic_mu: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OdeConfig {
    /// Cosine coefficients of σ.
    pub sigma: Vec<f64>,
    pub c: f64,
    pub period: f64,
    pub samples: usize,
    /// Defaults to the regime's singularity.
    pub singularity: Option<Singularity>,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { sigma: vec![1.0, 0.3], c: 1.0, period: 2.0 * PI, samples: 128, singularity: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub n: usize,
    pub model: ModelConfig,
    pub regime: Regime,
    pub log_terms: LogTermModel,
    /// Cosine coefficients of `h` over one geodesic period.
    pub h: Vec<f64>,
    /// Descending ε sweep.
    pub eps: Vec<f64>,
    pub seed: Option<u64>,
    /// Residual evaluations per projection.
    pub budget: usize,
    /// Where reports go; not part of the hashed configuration.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub residual: ResidualConfig,
    pub ode: OdeConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 8,
            model: ModelConfig::preset("perturbed", 8).expect("preset"),
            regime: Regime::Subcritical,
            log_terms: LogTermModel::Complete,
            h: vec![0.4, 0.0, 0.1],
            eps: vec![1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3],
            seed: None,
            budget: 1_000_000,
            out: None,
            tolerances: Tolerances::default(),
            residual: ResidualConfig::default(),
            ode: OdeConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<Dimension> {
        let dim = Dimension::new(self.n)?;
        if self.eps.is_empty() || self.eps.iter().any(|e| !(*e > 0.0)) || self.eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::Config("eps must be positive and strictly descending".into()));
        }
        if self.h.is_empty() {
            return Err(CliError::Config("h needs at least one cosine coefficient".into()));
        }
        Ok(dim)
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| CliError::Config("a seed is required for Monte-Carlo commands".into()))
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn h_on(&self, period: f64, m: usize) -> PeriodicFunction {
        let s = CosineSeries { period, coeffs: self.h.clone() };
        PeriodicFunction::new(period, s.sample(m))
    }
}
