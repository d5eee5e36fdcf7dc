use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filament_cli::{cmd_constants, cmd_geodesic, cmd_ode, cmd_reduce, cmd_residual, CliError, ModelConfig, RunConfig};
use filament_reduction::Regime;

#[derive(Parser)]
#[command(name = "filament", version, about = "Concentrating solutions along closed geodesics: experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Ambient dimension n (bubble dimension n − 1).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Model preset: flat, sphere, perturbed.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true, value_enum)]
    regime: Option<RegimeArg>,
    /// Comma-separated descending ε values.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Residual evaluations per projection.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Output directory; JSON goes to stdout without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Subcritical,
    Supercritical,
}

#[derive(Subcommand)]
enum Command {
    /// Quadrature constants against their closed forms.
    Constants,
    /// Closed geodesic, parallel frame, curvature and Jacobi nondegeneracy.
    Geodesic,
    /// Reduced ODE chain and the gap condition.
    Reduce,
    /// Monte-Carlo residual scaling sweep.
    Residual {
        /// Use constant parameters instead of the reduced ones; the value
        /// defaults to half the mean of μ0.
        #[arg(long, num_args = 0..=1)]
        generic_mu: Option<Option<f64>>,
    },
    /// Standalone singular periodic ODE solve.
    Ode,
}

fn resolve(c: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = c.n {
        cfg.n = n;
        if c.config.is_none() && c.model.is_none() {
            cfg.model = ModelConfig::preset("perturbed", n)?;
        }
    }
    if let Some(m) = &c.model {
        cfg.model = ModelConfig::preset(m, cfg.n)?;
    }
    if let Some(r) = c.regime {
        cfg.regime = match r {
            RegimeArg::Subcritical => Regime::Subcritical,
            RegimeArg::Supercritical => Regime::Supercritical,
        };
    }
    if let Some(e) = &c.eps {
        cfg.eps = e.clone();
    }
    if c.seed.is_some() {
        cfg.seed = c.seed;
    }
    if let Some(b) = c.budget {
        cfg.budget = b;
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli.common)?;
    let out = match &cli.command {
        Command::Constants => cmd_constants(&cfg)?,
        Command::Geodesic => cmd_geodesic(&cfg)?,
        Command::Reduce => cmd_reduce(&cfg)?,
        Command::Residual { generic_mu } => {
            if cfg.out.is_none() {
                return Err(CliError::Config("residual writes JSON and CSV; pass --out".into()));
            }
            cmd_residual(&cfg, *generic_mu)?
        }
        Command::Ode => cmd_ode(&cfg)?,
    };
    out.emit(cfg.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
