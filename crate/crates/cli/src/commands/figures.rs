use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use pairglow_core::{
    c1, c2, find_critical_times, mu, mu_bar, trace_concurrence, InitialElectronicState,
    MotionDistribution,
};
use rayon::prelude::*;

use crate::config::{Positive, Steps};
use crate::error::CliResult;
use crate::output::{header, num, opt, write_csv, OutDir};

const CURVE_MU: [f64; 3] = [1.0, 0.5, 0.0];
const INSET_SPREADS: [f64; 4] = [0.0, 0.05, 0.1, 0.2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Figure {
    /// Dipole-dipole pattern for both orientations.
    Fig1,
    /// Zeros of c1 and c2 against p.
    Fig2,
    /// Concurrence from both atoms excited.
    Fig3,
    /// Concurrence from a degraded Bell state.
    Fig4,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Figures to produce (default: all).
    pub which: Vec<Figure>,
    /// Samples of x in (0, 8 pi] for fig1.
    #[arg(long, default_value = "2000")]
    pub x_points: Steps,
    /// Also write the distance-averaged pattern against mean distance.
    #[arg(long)]
    pub inset: bool,
    /// Samples of p in (0, 1] for fig2.
    #[arg(long, default_value = "200")]
    pub p_points: Steps,
    /// Final reduced time for fig3 and fig4.
    #[arg(long, default_value = "10")]
    pub tau_max: Positive,
    /// Time steps for fig3 and fig4.
    #[arg(long, default_value = "1000")]
    pub n_steps: Steps,
}

pub fn run(args: &FiguresArgs, out: &OutDir, jobs: Option<usize>) -> CliResult<()> {
    let mut which = args.which.clone();
    if which.is_empty() {
        which = vec![Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];
    }
    which.sort();
    which.dedup();
    for fig in which {
        let name = match fig {
            Figure::Fig1 => {
                fig1(args.x_points.0, out)?;
                if args.inset {
                    fig1_inset(out, jobs)?;
                }
                "fig1.csv"
            }
            Figure::Fig2 => {
                fig2(args.p_points.0, out)?;
                "fig2.csv"
            }
            Figure::Fig3 => {
                concurrence_curves(1.0, 1.0, args, out.join("fig3.csv"))?;
                "fig3.csv"
            }
            Figure::Fig4 => {
                concurrence_curves(0.5, 0.3, args, out.join("fig4.csv"))?;
                "fig4.csv"
            }
        };
        println!("wrote {}", out.join(name).display());
    }
    Ok(())
}

fn fig1(n: usize, out: &OutDir) -> CliResult<()> {
    let x_max = 8.0 * PI;
    write_csv(
        &out.join("fig1.csv"),
        &header(&["x", "mu_xi0", "mu_xi1"]),
        (1..=n).map(|i| {
            let x = x_max * i as f64 / n as f64;
            vec![num(x), num(mu(0.0, x)), num(mu(1.0, x))]
        }),
    )
}

/// `mu_bar` for `xi = 1` against the mean distance, one column per spread.
fn fig1_inset(out: &OutDir, jobs: Option<usize>) -> CliResult<()> {
    let n = 200;
    let rbar: Vec<f64> = (1..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
    let rows = super::pool(jobs)?.install(|| {
        rbar.par_iter()
            .map(|&r| {
                let mut row = vec![num(r)];
                for dr in INSET_SPREADS {
                    let x = 2.0 * PI * r;
                    let law = if dr == 0.0 {
                        MotionDistribution::delta(x)?
                    } else {
                        MotionDistribution::radial_gaussian(x, 2.0 * PI * dr)?
                    };
                    row.push(num(mu_bar(1.0, &law)?.mu_bar));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, pairglow_core::Error>>()
    })?;
    let mut head = vec!["rbar_over_lambda0".to_string()];
    head.extend(INSET_SPREADS.iter().map(|dr| format!("mu_bar_dr{dr}")));
    write_csv(&out.join("fig1_inset.csv"), &head, rows)
}

/// Zeros of `c1` (q = 1) and `c2` against `p`. A zero sitting exactly on the
/// boundary of `[0, 1]` is written as that boundary value.
fn fig2(n: usize, out: &OutDir) -> CliResult<()> {
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let p = i as f64 / n as f64;
        let mut row = vec![num(p)];
        let ct = find_critical_times(p, 1.0, 1.0)?;
        let eps1 = ct.eps1.or_else(|| (c1(1.0, p, 1.0) == 0.0).then_some(1.0));
        row.push(opt(eps1));
        for m in CURVE_MU {
            let ct = find_critical_times(p, 1.0, m)?;
            let eps2 = match ct.eps2 {
                Some(e) => Some(e),
                None => (c2(0.0, p, m)? == 0.0).then_some(0.0),
            };
            row.push(opt(eps2));
        }
        rows.push(row);
    }
    let mut head = vec!["p".to_string(), "eps1".to_string()];
    head.extend(CURVE_MU.iter().map(|m| format!("eps2_mu{m}")));
    write_csv(&out.join("fig2.csv"), &head, rows)
}

fn concurrence_curves(
    p: f64,
    q: f64,
    args: &FiguresArgs,
    path: std::path::PathBuf,
) -> CliResult<()> {
    let n = args.n_steps.0;
    let grid: Vec<f64> = (0..=n)
        .map(|i| args.tau_max.0 * i as f64 / n as f64)
        .collect();
    let init = InitialElectronicState::new(p, q)?;
    let traces = CURVE_MU
        .iter()
        .map(|&m| trace_concurrence(&init, m, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut head = vec!["tau".to_string()];
    head.extend(CURVE_MU.iter().map(|m| format!("C_mu{m}")));
    write_csv(
        &path,
        &head,
        grid.iter().enumerate().map(|(i, &tau)| {
            let mut row = vec![num(tau)];
            row.extend(traces.iter().map(|t| num(t.concurrence[i])));
            row
        }),
    )
}
