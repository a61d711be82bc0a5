use std::path::PathBuf;

use clap::Args;
use pairglow_core::units::DEFAULT_STRICT_FACTOR;
use pairglow_core::{validate_regime, AtomPairConfig, RegimeReport};
use serde::{Deserialize, Serialize};

use crate::config::{self, Positive, StrictFactor, Unit};
use crate::error::{CliError, CliResult};
use crate::output::{write_json, OutDir, SCHEMA};

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Physical configuration (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transition wavelength [m].
    #[arg(long)]
    pub lambda0_m: Option<Positive>,
    /// Transition angular frequency [rad/s].
    #[arg(long)]
    pub omega0_rad_s: Option<Positive>,
    /// Natural linewidth [rad/s].
    #[arg(long)]
    pub gamma0_rad_s: Option<Positive>,
    /// Atomic mass [kg].
    #[arg(long)]
    pub mass_kg: Option<Positive>,
    #[arg(long)]
    pub xi: Option<Unit>,
    /// Mean inter-atomic distance [m].
    #[arg(long)]
    pub rbar_m: Option<Positive>,
    /// Initial rms spread of the distance [m].
    #[arg(long)]
    pub dr_initial_m: Option<Positive>,
    /// Minimum ratio for a margin to pass.
    #[arg(long)]
    pub strict_factor: Option<StrictFactor>,
    /// Report file name inside --out.
    #[arg(long, default_value = "validate.json")]
    pub output: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateFile {
    atoms: Option<AtomPairConfig>,
    rbar_m: Option<Positive>,
    dr_initial_m: Option<Positive>,
    strict_factor: Option<StrictFactor>,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    schema: u32,
    atoms: AtomPairConfig,
    rbar_m: f64,
    dr_initial_m: f64,
    all_pass: bool,
    report: &'a RegimeReport,
}

fn atoms(args: &ValidateArgs, base: Option<AtomPairConfig>) -> CliResult<AtomPairConfig> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| {
            CliError::Config(format!(
                "{name} missing: set it in atoms or pass --{}",
                name.replace('_', "-")
            ))
        })
    };
    let flag = |v: Option<Positive>| v.map(|x| x.0);
    let (omega0, lambda0) = match (flag(args.omega0_rad_s), flag(args.lambda0_m)) {
        (None, None) => (base.map(|b| b.omega0), base.map(|b| b.lambda0)),
        given => given,
    };
    AtomPairConfig::from_parts(
        omega0,
        lambda0,
        need(
            flag(args.gamma0_rad_s).or(base.map(|b| b.gamma0)),
            "gamma0_rad_s",
        )?,
        need(flag(args.mass_kg).or(base.map(|b| b.mass)), "mass_kg")?,
        need(args.xi.map(|x| x.0).or(base.map(|b| b.xi)), "xi")?,
    )
    .map_err(CliError::input)
}

pub fn run(args: &ValidateArgs, out: &OutDir) -> CliResult<()> {
    let file: ValidateFile = config::load_opt(args.config.as_deref())?;
    let cfg = atoms(args, file.atoms)?;
    let rbar = args.rbar_m.or(file.rbar_m).ok_or_else(|| {
        CliError::Config("rbar_m missing: set it in the config or pass --rbar-m".into())
    })?;
    let dr = args.dr_initial_m.or(file.dr_initial_m).ok_or_else(|| {
        CliError::Config("dr_initial_m missing: set it in the config or pass --dr-initial-m".into())
    })?;
    let strict = args
        .strict_factor
        .or(file.strict_factor)
        .map_or(DEFAULT_STRICT_FACTOR, |s| s.0);
    let report = validate_regime(&cfg, rbar.0, dr.0, strict).map_err(CliError::input)?;

    print!("{}", render(&report));
    write_json(
        &out.join(&args.output),
        &Report {
            schema: SCHEMA,
            atoms: cfg,
            rbar_m: rbar.0,
            dr_initial_m: dr.0,
            all_pass: report.all_pass(),
            report: &report,
        },
    )
}

pub fn render(report: &RegimeReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "recoil energy        {:.6e} J\n",
        report.recoil_energy
    ));
    s.push_str(&format!(
        "dispersion length    {:.6e} m\n",
        report.dispersion_length
    ));
    s.push_str(&format!(
        "spread lower bound   {:.6e} m\n",
        report.dr_lower_bound
    ));
    s.push_str(&format!(
        "spread after 1/gamma {:.6e} m\n\n",
        report.dr_final
    ));
    let width = report
        .margins
        .iter()
        .map(|m| m.condition.len())
        .max()
        .unwrap_or(0);
    s.push_str(&format!(
        "{:width$}  {:>12}  {:>8}  result\n",
        "condition", "ratio", "required"
    ));
    for m in &report.margins {
        s.push_str(&format!(
            "{:width$}  {:>12.4e}  {:>8}  {}\n",
            m.condition,
            m.ratio,
            report.strict_factor,
            if m.pass { "PASS" } else { "FAIL" }
        ));
    }
    for w in &report.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}
