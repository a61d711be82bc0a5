use std::f64::consts::PI;

use clap::Args;
use pairglow_core::pattern::DEFAULT_WINDOW;
use pairglow_core::{a_spectral, mu};
use rayon::prelude::*;

use crate::config::{EpsSp, NonNegative, Positive, Steps, Unit, Window};
use crate::error::{CliError, CliResult};
use crate::output::{num, write_csv, OutDir};

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Orientation factors, one column each (default: 0 and 1).
    #[arg(long, value_delimiter = ',')]
    pub xi: Vec<Unit>,
    #[arg(long, default_value = "0")]
    pub x_min: NonNegative,
    /// Largest x = k0 r (default 8 pi).
    #[arg(long)]
    pub x_max: Option<Positive>,
    #[arg(long, default_value = "1000")]
    pub points: Steps,
    /// Linewidth ratio gamma0/omega0; adds Lorentzian-averaged columns.
    #[arg(long)]
    pub eps_sp: Option<EpsSp>,
    /// Half-width of the detuning window in linewidths.
    #[arg(long = "window-W")]
    pub window: Option<Window>,
    #[arg(long, default_value = "pattern.csv")]
    pub output: String,
}

pub fn run(args: &PatternArgs, out: &OutDir, jobs: Option<usize>) -> CliResult<()> {
    let xis: Vec<f64> = if args.xi.is_empty() {
        vec![0.0, 1.0]
    } else {
        args.xi.iter().map(|x| x.0).collect()
    };
    let lo = args.x_min.0;
    let hi = args.x_max.map_or(8.0 * PI, |x| x.0);
    if hi <= lo {
        return Err(CliError::Config(format!("x range [{lo}, {hi}] is empty")));
    }
    let window = args.window.map_or(DEFAULT_WINDOW, |w| w.0);
    let n = args.points.0;
    let xs: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();

    let mut head = vec!["x".to_string()];
    head.extend(xis.iter().map(|xi| format!("mu_xi{xi}")));
    if args.eps_sp.is_some() {
        head.extend(xis.iter().map(|xi| format!("a_xi{xi}")));
    }

    let rows = super::pool(jobs)?.install(|| {
        xs.par_iter()
            .map(|&x| {
                let mut row = vec![num(x)];
                row.extend(xis.iter().map(|&xi| num(mu(xi, x))));
                if let Some(eps) = args.eps_sp {
                    for &xi in &xis {
                        row.push(num(a_spectral(xi, x, eps.0, window)?.value));
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, pairglow_core::Error>>()
    })?;
    let path = out.join(&args.output);
    write_csv(&path, &head, rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
