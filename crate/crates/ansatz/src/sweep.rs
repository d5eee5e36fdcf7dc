//! ε sweeps and log-log slope fits.

use serde::{Deserialize, Serialize};

use crate::error::{AnsatzError, Result};
use crate::field::{AnsatzField, FieldSlice};
use crate::montecarlo::{project_channels, Channel, Estimate};

/// Only estimates with `stderr < SIGNAL_FRACTION · |estimate|` enter a fit.
pub const SIGNAL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Descending, at least five values spanning a decade.
    pub eps: Vec<f64>,
    pub channels: Vec<Channel>,
    /// Slice position along the geodesic.
    pub x0: f64,
    pub budget: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn default_eps() -> Vec<f64> {
        vec![1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3]
    }

    fn validate(&self) -> Result<()> {
        let e = &self.eps;
        if e.len() < 5 || e.iter().any(|v| !(*v > 0.0)) || e.windows(2).any(|w| w[1] >= w[0]) {
            return Err(AnsatzError::Input("ε list must hold ≥ 5 positive descending values".into()));
        }
        if e[0] / e[e.len() - 1] < 10.0 {
            return Err(AnsatzError::Input("ε list spans less than a decade".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointwiseStats {
    /// `S_ε(0)`.
    pub origin: f64,
    /// Over a fixed point set of radii `≤ 4`.
    pub sup: f64,
    pub rms: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsRow {
    pub eps: f64,
    pub pointwise: PointwiseStats,
    pub projections: Vec<Estimate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeFit {
    pub channel: String,
    pub slope: f64,
    pub stderr: f64,
    /// `slope ± 2 stderr`.
    pub ci: (f64, f64),
    pub intercept: f64,
    /// ε values that passed the signal filter.
    pub eps_used: Vec<f64>,
    /// Scatter about the line in units of the Monte-Carlo errors; zero for
    /// deterministic data.
    pub reduced_chi2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualReport {
    pub x0: f64,
    pub budget: usize,
    pub seed: u64,
    pub rows: Vec<EpsRow>,
    pub fits: Vec<SlopeFit>,
    /// Fit of `|S_ε(0)|`.
    pub pointwise_fit: SlopeFit,
}

impl ResidualReport {
    pub fn fit(&self, channel: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.channel == channel)
    }

    /// Rows `eps,channel,estimate,stderr`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eps,channel,estimate,stderr\n");
        for row in &self.rows {
            for p in &row.projections {
                s.push_str(&format!("{:e},{},{:e},{:e}\n", row.eps, p.channel, p.estimate, p.stderr));
            }
        }
        s
    }
}

/// Ordinary least squares of `ln|v|` against `ln ε`.
///
/// With `stderr` given, points failing the signal filter are dropped and the
/// slope error is the larger of the scatter estimate and the Monte-Carlo
/// error propagated through the fit. The fit is unweighted: at the large-ε
/// end the Monte-Carlo error is far below the higher-order model error, so
/// inverse-variance weights would pin the slope to the least asymptotic
/// points.
pub fn fit_slope(channel: &str, eps: &[f64], values: &[f64], stderr: Option<&[f64]>) -> Result<SlopeFit> {
    let mut pts = Vec::new();
    for (i, (&e, &v)) in eps.iter().zip(values).enumerate() {
        let rel = match stderr {
            Some(se) if !(se[i] < SIGNAL_FRACTION * v.abs()) => continue,
            Some(se) => se[i] / v.abs(),
            None if v == 0.0 => continue,
            None => 0.0,
        };
        pts.push((e.ln(), v.abs().ln(), rel, e));
    }
    if pts.len() < 3 {
        return Err(AnsatzError::InsufficientSignal(format!(
            "{channel}: {} of {} points above noise",
            pts.len(),
            eps.len()
        )));
    }
    let k = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xm).powi(2)).sum();
    let slope = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum::<f64>() / sxx;
    let intercept = ym - slope * xm;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let scatter = (ssr / (k - 2.0) / sxx).sqrt();
    let mc = pts.iter().map(|p| ((p.0 - xm) * p.2).powi(2)).sum::<f64>().sqrt() / sxx;
    let mc_chi2: f64 = pts.iter().filter(|p| p.2 > 0.0).map(|p| ((p.1 - intercept - slope * p.0) / p.2).powi(2)).sum();
    let se = scatter.max(mc);
    Ok(SlopeFit {
        channel: channel.to_string(),
        slope,
        stderr: se,
        ci: (slope - 2.0 * se, slope + 2.0 * se),
        intercept,
        eps_used: pts.iter().map(|p| p.3).collect(),
        reduced_chi2: mc_chi2 / (k - 2.0),
    })
}

fn pointwise(slice: &FieldSlice<'_>) -> Result<PointwiseStats> {
    let n = slice.field.dim.big_n;
    let diag = 1.0 / (n as f64).sqrt();
    let origin = slice.residual(&vec![0.0; n])?;
    let (mut sup, mut sq, mut count) = (origin.abs(), origin * origin, 1usize);
    for r in [0.5, 1.0, 2.0, 4.0] {
        let mut dirs: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let mut y = vec![0.0; n];
                y[k] = r;
                y
            })
            .collect();
        dirs.push(vec![r * diag; n]);
        for y in dirs {
            let s = slice.residual(&y)?;
            sup = sup.max(s.abs());
            sq += s * s;
            count += 1;
        }
    }
    Ok(PointwiseStats { origin, sup, rms: (sq / count as f64).sqrt(), points: count })
}

/// Runs `field` at every ε of the config, projecting at the fixed slice
/// `x_0`, and fits slopes for every channel and for `|S_ε(0)|`.
pub fn scaling_sweep(field: &AnsatzField, config: &SweepConfig) -> Result<ResidualReport> {
    config.validate()?;
    let n = field.dim.big_n;
    let mut rows = Vec::with_capacity(config.eps.len());
    for &eps in &config.eps {
        let f = field.with_eps(eps)?;
        let slice = f.slice(config.x0)?;
        let pointwise = pointwise(&slice)?;
        let projections = project_channels(&slice, &config.channels, config.budget, config.seed)?;
        rows.push(EpsRow { eps, pointwise, projections });
    }
    let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let mut fits = Vec::new();
    for (c, ch) in config.channels.iter().enumerate() {
        let v: Vec<f64> = rows.iter().map(|r| r.projections[c].estimate).collect();
        let se: Vec<f64> = rows.iter().map(|r| r.projections[c].stderr).collect();
        fits.push(fit_slope(&ch.label(n), &eps, &v, Some(&se))?);
    }
    let origin: Vec<f64> = rows.iter().map(|r| r.pointwise.origin).collect();
    let pointwise_fit = fit_slope("pointwise", &eps, &origin, None)?;
    Ok(ResidualReport { x0: config.x0, budget: config.budget, seed: config.seed, rows, fits, pointwise_fit })
}
