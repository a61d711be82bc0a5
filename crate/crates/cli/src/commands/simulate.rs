use std::path::PathBuf;

use clap::Args;
use pairglow_core::pattern::AverageMethod;
use pairglow_core::{
    find_critical_times, mu_bar, trace_concurrence, CriticalTimes, DistributionSpec,
    InitialElectronicState,
};
use serde::{Deserialize, Serialize};

use crate::config::{self, Distribution, DistributionFlags, MuBar, Positive, Steps, Unit};
use crate::error::{CliError, CliResult};
use crate::output::{header, num, write_csv, write_json, OutDir, SCHEMA};

const DEFAULT_TAU_MAX: f64 = 10.0;
const DEFAULT_STEPS: usize = 1000;

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Excited-state probability.
    #[arg(long)]
    pub p: Option<Unit>,
    /// Coherence factor of the initial state.
    #[arg(long)]
    pub q: Option<Unit>,
    /// Pattern average used directly; replaces any distribution.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_bar: Option<MuBar>,
    /// Dipole orientation factor for a distribution-averaged pattern.
    #[arg(long)]
    pub xi: Option<Unit>,
    #[command(flatten)]
    pub distribution: DistributionFlags,
    /// Final reduced time.
    #[arg(long)]
    pub tau_max: Option<Positive>,
    /// Number of time steps.
    #[arg(long)]
    pub n_steps: Option<Steps>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    initial: InitialSection,
    pattern: Option<PatternSource>,
    #[serde(default)]
    time: TimeSection,
    #[serde(default)]
    outputs: OutputNames,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSection {
    p: Option<Unit>,
    q: Option<Unit>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeSection {
    tau_max: Option<Positive>,
    n_steps: Option<Steps>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputNames {
    pub concurrence: String,
    pub xstate: String,
    pub summary: String,
}

impl Default for OutputNames {
    fn default() -> Self {
        Self {
            concurrence: "concurrence.csv".into(),
            xstate: "xstate.csv".into(),
            summary: "summary.json".into(),
        }
    }
}

/// Where `mu_bar` comes from: given directly, or averaged over a distance law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub enum PatternSource {
    Direct(f64),
    Averaged { xi: f64, distribution: Distribution },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    #[serde(skip_serializing_if = "Option::is_none")]
    mu_bar: Option<MuBar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi: Option<Unit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distribution: Option<Distribution>,
}

impl TryFrom<RawPattern> for PatternSource {
    type Error = String;

    fn try_from(raw: RawPattern) -> Result<Self, String> {
        match (raw.mu_bar, raw.distribution) {
            (Some(_), Some(_)) => Err("give either mu_bar or distribution, not both".into()),
            (None, None) => Err("pattern needs mu_bar or distribution".into()),
            (Some(_), None) if raw.xi.is_some() => {
                Err("xi only applies together with a distribution".into())
            }
            (Some(m), None) => Ok(PatternSource::Direct(m.0)),
            (None, Some(distribution)) => {
                let xi = raw.xi.ok_or("a distribution needs xi")?;
                Ok(PatternSource::Averaged {
                    xi: xi.0,
                    distribution,
                })
            }
        }
    }
}

impl From<PatternSource> for RawPattern {
    fn from(p: PatternSource) -> Self {
        match p {
            PatternSource::Direct(m) => RawPattern {
                mu_bar: Some(MuBar(m)),
                xi: None,
                distribution: None,
            },
            PatternSource::Averaged { xi, distribution } => RawPattern {
                mu_bar: None,
                xi: Some(Unit(xi)),
                distribution: Some(distribution),
            },
        }
    }
}

/// A complete, validated simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub p: f64,
    pub q: f64,
    pub pattern: PatternSource,
    pub tau_max: f64,
    pub n_steps: usize,
    pub outputs: OutputNames,
}

impl ScenarioConfig {
    pub fn resolve(args: &SimulateArgs) -> CliResult<Self> {
        let file: ScenarioFile = config::load_opt(args.config.as_deref())?;
        let missing = |what: &str, key: &str, flag: &str| {
            CliError::Config(format!(
                "{what} missing: set {key} in the config or pass {flag}"
            ))
        };
        let p = args
            .p
            .or(file.initial.p)
            .ok_or_else(|| missing("p", "initial.p", "--p"))?;
        let q = args
            .q
            .or(file.initial.q)
            .ok_or_else(|| missing("q", "initial.q", "--q"))?;

        let pattern = if let Some(m) = args.mu_bar {
            if args.xi.is_some() || args.distribution.any() {
                return Err(CliError::Config(
                    "--mu-bar cannot be combined with --xi or distribution flags".into(),
                ));
            }
            PatternSource::Direct(m.0)
        } else if args.xi.is_some() || args.distribution.any() {
            let (base_xi, base_dist) = match file.pattern {
                Some(PatternSource::Averaged { xi, distribution }) => {
                    (Some(xi), Some(DistributionSpec::from(distribution)))
                }
                _ => (None, None),
            };
            let distribution = args.distribution.merge(base_dist)?.ok_or_else(|| {
                CliError::Config("--xi needs a distribution (--kind, --rbar-over-lambda0)".into())
            })?;
            let xi = args
                .xi
                .map(|x| x.0)
                .or(base_xi)
                .ok_or_else(|| missing("xi", "pattern.xi", "--xi"))?;
            PatternSource::Averaged { xi, distribution }
        } else {
            file.pattern
                .ok_or_else(|| missing("pattern", "pattern.mu_bar", "--mu-bar"))?
        };

        Ok(Self {
            p: p.0,
            q: q.0,
            pattern,
            tau_max: args
                .tau_max
                .or(file.time.tau_max)
                .map_or(DEFAULT_TAU_MAX, |t| t.0),
            n_steps: args
                .n_steps
                .or(file.time.n_steps)
                .map_or(DEFAULT_STEPS, |n| n.0),
            outputs: file.outputs,
        })
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        let n = self.n_steps as f64;
        (0..=self.n_steps)
            .map(|i| self.tau_max * i as f64 / n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PatternSummary {
    pub mu_bar: f64,
    pub source: PatternSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<AverageMethod>,
    pub est_error: f64,
}

pub fn resolve_mu_bar(source: PatternSource) -> CliResult<PatternSummary> {
    match source {
        PatternSource::Direct(m) => Ok(PatternSummary {
            mu_bar: m,
            source,
            method: None,
            est_error: 0.0,
        }),
        PatternSource::Averaged { xi, distribution } => {
            let avg = mu_bar(xi, &distribution.law)?;
            Ok(PatternSummary {
                mu_bar: avg.mu_bar,
                source,
                method: Some(avg.method),
                est_error: avg.est_error,
            })
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    schema: u32,
    p: f64,
    q: f64,
    pattern: PatternSummary,
    tau_max: f64,
    n_steps: usize,
    critical_times: CriticalTimes,
    dark_window: Option<f64>,
    final_concurrence: f64,
    outputs: &'a OutputNames,
}

pub fn run(args: &SimulateArgs, out: &OutDir) -> CliResult<()> {
    let cfg = ScenarioConfig::resolve(args)?;
    let init = InitialElectronicState::new(cfg.p, cfg.q).map_err(CliError::input)?;
    let pattern = resolve_mu_bar(cfg.pattern)?;
    let grid = cfg.tau_grid();
    let trace = trace_concurrence(&init, pattern.mu_bar, &grid)?;
    let ct = find_critical_times(cfg.p, cfg.q, pattern.mu_bar)?;
    for s in &trace.states {
        s.check()?;
    }

    write_csv(
        &out.join(&cfg.outputs.concurrence),
        &header(&["tau", "eps", "c1", "c2", "C"]),
        (0..trace.len()).map(|i| {
            vec![
                num(trace.tau[i]),
                num(trace.eps[i]),
                num(trace.c1[i]),
                num(trace.c2[i]),
                num(trace.concurrence[i]),
            ]
        }),
    )?;
    write_csv(
        &out.join(&cfg.outputs.xstate),
        &header(&[
            "tau",
            "eps",
            "rho_ee",
            "rho_eg_abs",
            "sigma_pp",
            "sigma_mm",
            "sigma_pm_re",
            "sigma_pm_im",
            "rho_gg",
            "trace",
        ]),
        trace
            .tau
            .iter()
            .zip(&trace.eps)
            .zip(&trace.states)
            .map(|((&tau, &eps), s)| {
                vec![
                    num(tau),
                    num(eps),
                    num(s.rho_ee),
                    num(s.rho_eg.modulus),
                    num(s.sigma_pp),
                    num(s.sigma_mm),
                    num(s.sigma_pm.re),
                    num(s.sigma_pm.im),
                    num(s.rho_gg),
                    num(s.trace()),
                ]
            }),
    )?;
    let summary = Summary {
        schema: SCHEMA,
        p: cfg.p,
        q: cfg.q,
        pattern,
        tau_max: cfg.tau_max,
        n_steps: cfg.n_steps,
        critical_times: ct,
        dark_window: ct.dark_window(),
        final_concurrence: *trace.concurrence.last().unwrap_or(&0.0),
        outputs: &cfg.outputs,
    };
    write_json(&out.join(&cfg.outputs.summary), &summary)?;

    match (ct.t1, ct.t2) {
        (Some(t1), Some(t2)) => {
            println!("t1 = {t1:.6}, t2 = {t2:.6}, C_stat = {}", ct.c_stationary)
        }
        (Some(t1), None) => println!("t1 = {t1:.6}, no rebirth, C_stat = {}", ct.c_stationary),
        (None, Some(t2)) => println!(
            "no sudden death, t2 = {t2:.6}, C_stat = {}",
            ct.c_stationary
        ),
        (None, None) => println!("no sudden death or birth, C_stat = {}", ct.c_stationary),
    }
    Ok(())
}
