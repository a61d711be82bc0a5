use std::path::PathBuf;

use clap::Args;
use pairglow_core::pattern::{mu_bar_spectral, DEFAULT_WINDOW};
use pairglow_core::{mu_bar, DistributionSpec, PatternAverage};
use serde::{Deserialize, Serialize};

use crate::config::{self, DistributionFlags, EpsSp, Unit, Window};
use crate::error::{CliError, CliResult};
use crate::output::{write_json, OutDir, SCHEMA};

#[derive(Debug, Args)]
pub struct AverageArgs {
    /// Averaging request (JSON): xi, distribution, optional eps_sp and window.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub xi: Option<Unit>,
    #[command(flatten)]
    pub distribution: DistributionFlags,
    /// Linewidth ratio gamma0/omega0; adds the Lorentzian-weighted average.
    #[arg(long)]
    pub eps_sp: Option<EpsSp>,
    /// Half-width of the detuning window in linewidths.
    #[arg(long = "window-W")]
    pub window: Option<Window>,
    #[arg(long, default_value = "average.json")]
    pub output: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AverageFile {
    xi: Option<Unit>,
    distribution: Option<config::Distribution>,
    eps_sp: Option<EpsSp>,
    window: Option<Window>,
}

#[derive(Debug, Serialize)]
struct Spectral {
    eps_sp: f64,
    window: f64,
    average: PatternAverage,
}

#[derive(Debug, Serialize)]
struct Report {
    schema: u32,
    xi: f64,
    distribution: DistributionSpec,
    near_field: PatternAverage,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral: Option<Spectral>,
}

pub fn run(args: &AverageArgs, out: &OutDir) -> CliResult<()> {
    let file: AverageFile = config::load_opt(args.config.as_deref())?;
    let xi = args
        .xi
        .or(file.xi)
        .ok_or_else(|| CliError::Config("xi missing: set it in the config or pass --xi".into()))?;
    let dist = args
        .distribution
        .merge(file.distribution.map(DistributionSpec::from))?
        .ok_or_else(|| {
            CliError::Config(
                "distribution missing: set it in the config or pass --kind and --rbar-over-lambda0"
                    .into(),
            )
        })?;
    let near = mu_bar(xi.0, &dist.law)?;
    let spectral = match args.eps_sp.or(file.eps_sp) {
        Some(eps) => {
            let window = args.window.or(file.window).map_or(DEFAULT_WINDOW, |w| w.0);
            Some(Spectral {
                eps_sp: eps.0,
                window,
                average: mu_bar_spectral(xi.0, &dist.law, eps.0, window)?,
            })
        }
        None => None,
    };

    println!(
        "mu_bar = {:.12} (error {:.1e})",
        near.mu_bar, near.est_error
    );
    if let Some(s) = &spectral {
        println!(
            "spectral mu_bar = {:.12} (error {:.1e}, W = {})",
            s.average.mu_bar, s.average.est_error, s.window
        );
    }
    write_json(
        &out.join(&args.output),
        &Report {
            schema: SCHEMA,
            xi: xi.0,
            distribution: dist.spec,
            near_field: near,
            spectral,
        },
    )
}
