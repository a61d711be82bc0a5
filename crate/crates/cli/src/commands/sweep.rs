use std::path::PathBuf;

use clap::{Args, ValueEnum};
use pairglow_core::{find_critical_times, CriticalTimes};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{self, MuAxis, UnitAxis};
use crate::error::{CliError, CliResult};
use crate::output::{num, opt, write_csv, OutDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Eps1,
    Eps2,
    T1,
    T2,
    #[value(name = "c_stat")]
    CStat,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::Eps1,
        Quantity::Eps2,
        Quantity::T1,
        Quantity::T2,
        Quantity::CStat,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Quantity::Eps1 => "eps1",
            Quantity::Eps2 => "eps2",
            Quantity::T1 => "t1",
            Quantity::T2 => "t2",
            Quantity::CStat => "c_stat",
        }
    }

    pub fn pick(self, ct: &CriticalTimes) -> Option<f64> {
        match self {
            Quantity::Eps1 => ct.eps1,
            Quantity::Eps2 => ct.eps2,
            Quantity::T1 => ct.t1,
            Quantity::T2 => ct.t2,
            Quantity::CStat => Some(ct.c_stationary),
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep file (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid over p: VALUE or START:STOP:N.
    #[arg(long)]
    pub p: Option<UnitAxis>,
    /// Grid over q (default 1).
    #[arg(long)]
    pub q: Option<UnitAxis>,
    /// Grid over mu_bar.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_bar: Option<MuAxis>,
    /// Columns to emit (default: all).
    #[arg(long, value_delimiter = ',')]
    pub quantities: Vec<Quantity>,
    /// Output file name inside --out.
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    p: Option<UnitAxis>,
    q: Option<UnitAxis>,
    mu_bar: Option<MuAxis>,
    quantities: Option<Vec<Quantity>>,
    output: Option<String>,
}

/// Validated grid and column selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub mu_bar: Vec<f64>,
    pub quantities: Vec<Quantity>,
    pub output: String,
}

impl SweepSpec {
    pub fn resolve(args: &SweepArgs) -> CliResult<Self> {
        let file: SweepFile = config::load_opt(args.config.as_deref())?;
        let p = args.p.clone().or(file.p).ok_or_else(|| {
            CliError::Config("p grid missing: set p in the config or pass --p".into())
        })?;
        let mu_bar = args.mu_bar.clone().or(file.mu_bar).ok_or_else(|| {
            CliError::Config(
                "mu_bar grid missing: set mu_bar in the config or pass --mu-bar".into(),
            )
        })?;
        let q = args
            .q
            .clone()
            .or(file.q)
            .map_or_else(|| vec![1.0], |a| a.values());
        let quantities = if !args.quantities.is_empty() {
            args.quantities.clone()
        } else {
            file.quantities.unwrap_or_else(|| Quantity::ALL.to_vec())
        };
        if quantities.is_empty() {
            return Err(CliError::Config("no quantities selected".into()));
        }
        Ok(Self {
            p: p.values(),
            q,
            mu_bar: mu_bar.values(),
            quantities,
            output: args
                .output
                .clone()
                .or(file.output)
                .unwrap_or_else(|| "sweep.csv".into()),
        })
    }

    /// Grid points in row order: `p` slowest, `mu_bar` fastest.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut pts = Vec::with_capacity(self.p.len() * self.q.len() * self.mu_bar.len());
        for &p in &self.p {
            for &q in &self.q {
                for &m in &self.mu_bar {
                    pts.push((p, q, m));
                }
            }
        }
        pts
    }
}

pub fn evaluate(spec: &SweepSpec, jobs: Option<usize>) -> CliResult<Vec<CriticalTimes>> {
    let points = spec.points();
    super::pool(jobs)?
        .install(|| {
            points
                .par_iter()
                .map(|&(p, q, m)| find_critical_times(p, q, m))
                .collect::<Result<Vec<_>, _>>()
        })
        .map_err(CliError::from)
}

pub fn run(args: &SweepArgs, out: &OutDir, jobs: Option<usize>) -> CliResult<()> {
    let spec = SweepSpec::resolve(args)?;
    let rows = evaluate(&spec, jobs)?;

    let mut head: Vec<String> = ["p", "q", "mu_bar"].iter().map(|s| s.to_string()).collect();
    head.extend(spec.quantities.iter().map(|q| q.column().to_string()));
    let path = out.join(&spec.output);
    write_csv(
        &path,
        &head,
        spec.points().into_iter().zip(&rows).map(|((p, q, m), ct)| {
            let mut row = vec![num(p), num(q), num(m)];
            row.extend(spec.quantities.iter().map(|k| opt(k.pick(ct))));
            row
        }),
    )?;
    println!("{} rows written to {}", rows.len(), path.display());
    Ok(())
}
