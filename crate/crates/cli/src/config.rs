//! Validated value types shared by config files and command-line flags.
//!
//! Every type checks its domain while it is being deserialized, so a bad
//! value in a config file is reported with its line and column.

use std::path::Path;
use std::str::FromStr;

use pairglow_core::{DistributionKind, DistributionSpec, MotionDistribution};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub fn load<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_opt<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    path.map_or_else(|| Ok(T::default()), load)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim().parse().map_err(|e| format!("{s:?}: {e}"))
}

macro_rules! checked_f64 {
    ($(#[$meta:meta])* $name:ident, $what:literal, |$v:ident| $ok:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "f64", into = "f64")]
        pub struct $name(pub f64);

        impl TryFrom<f64> for $name {
            type Error = String;

            fn try_from($v: f64) -> Result<Self, String> {
                if $ok {
                    Ok(Self($v))
                } else {
                    Err(format!(concat!("expected ", $what, ", got {}"), $v))
                }
            }
        }

        impl From<$name> for f64 {
            fn from(v: $name) -> f64 {
                v.0
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                Self::try_from(parse_f64(s)?)
            }
        }
    };
}

checked_f64!(
    /// Probability-like value in `[0, 1]` (`p`, `q`, `xi`).
    Unit, "a value in [0, 1]", |v| (0.0..=1.0).contains(&v)
);
checked_f64!(MuBar, "mu_bar in [-1, 1]", |v| (-1.0..=1.0).contains(&v));
checked_f64!(Positive, "a positive finite number", |v| v.is_finite()
    && v > 0.0);
checked_f64!(NonNegative, "a non-negative finite number", |v| v
    .is_finite()
    && v >= 0.0);
checked_f64!(
    /// Ratio `γ₀/ω₀` accepted by the spectral averages.
    EpsSp, "a linewidth ratio in (0, 1e-2)", |v| v > 0.0 && v < 1e-2
);
checked_f64!(
    /// Half-width of the detuning window in linewidths.
    Window, "a window of at least 10 linewidths", |v| v.is_finite() && v >= 10.0
);
checked_f64!(StrictFactor, "a strict factor >= 1", |v| v.is_finite()
    && v >= 1.0);

/// Number of time steps; the grid has `n + 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Steps(pub usize);

impl TryFrom<usize> for Steps {
    type Error = String;

    fn try_from(n: usize) -> Result<Self, String> {
        if n >= 2 {
            Ok(Self(n))
        } else {
            Err(format!("expected at least 2 steps, got {n}"))
        }
    }
}

impl From<Steps> for usize {
    fn from(s: Steps) -> usize {
        s.0
    }
}

impl FromStr for Steps {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let n: usize = s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        Self::try_from(n)
    }
}

/// A distance law that is known to be valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub struct Distribution {
    pub spec: DistributionSpec,
    pub law: MotionDistribution,
}

impl TryFrom<DistributionSpec> for Distribution {
    type Error = String;

    fn try_from(spec: DistributionSpec) -> Result<Self, String> {
        let law = spec.to_distribution().map_err(|e| e.to_string())?;
        Ok(Self { spec, law })
    }
}

impl From<Distribution> for DistributionSpec {
    fn from(d: Distribution) -> Self {
        d.spec
    }
}

/// Flag-level description of a distance law. Unset fields fall back to the
/// config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct DistributionFlags {
    /// Distance law: delta or radial_gaussian.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<DistributionKind>,
    /// Mean distance in wavelengths.
    #[arg(long)]
    pub rbar_over_lambda0: Option<Positive>,
    /// Rms spread in wavelengths (zero for delta).
    #[arg(long)]
    pub dr_over_lambda0: Option<NonNegative>,
}

fn parse_kind(s: &str) -> Result<DistributionKind, String> {
    match s {
        "delta" => Ok(DistributionKind::Delta),
        "radial_gaussian" => Ok(DistributionKind::RadialGaussian),
        _ => Err(format!(
            "unknown distribution kind {s:?}; use delta or radial_gaussian"
        )),
    }
}

impl DistributionFlags {
    pub fn any(&self) -> bool {
        self.kind.is_some() || self.rbar_over_lambda0.is_some() || self.dr_over_lambda0.is_some()
    }

    /// Applies the flags on top of `base`.
    pub fn merge(&self, base: Option<DistributionSpec>) -> CliResult<Option<Distribution>> {
        if !self.any() {
            return base
                .map(|spec| Distribution::try_from(spec).map_err(CliError::Config))
                .transpose();
        }
        let kind = self.kind.or(base.map(|b| b.kind)).ok_or_else(|| {
            CliError::Config("distribution kind missing: set --kind or distribution.kind".into())
        })?;
        let rbar = self
            .rbar_over_lambda0
            .map(f64::from)
            .or(base.map(|b| b.rbar_over_lambda0))
            .ok_or_else(|| {
                CliError::Config(
                    "mean distance missing: set --rbar-over-lambda0 or distribution.rbar_over_lambda0"
                        .into(),
                )
            })?;
        let dr = self
            .dr_over_lambda0
            .map(f64::from)
            .or(base.map(|b| b.dr_over_lambda0))
            .unwrap_or(0.0);
        let spec = DistributionSpec {
            kind,
            rbar_over_lambda0: rbar,
            dr_over_lambda0: dr,
        };
        Distribution::try_from(spec)
            .map(Some)
            .map_err(CliError::Config)
    }
}

macro_rules! axis_type {
    ($(#[$meta:meta])* $name:ident, $param:literal, $lo:expr, $hi:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "RawAxis", into = "RawAxis")]
        pub struct $name(RawAxis);

        impl TryFrom<RawAxis> for $name {
            type Error = String;

            fn try_from(raw: RawAxis) -> Result<Self, String> {
                raw.check($param, $lo, $hi)?;
                Ok(Self(raw))
            }
        }

        impl From<$name> for RawAxis {
            fn from(a: $name) -> RawAxis {
                a.0
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                Self::try_from(s.parse::<RawAxis>()?)
            }
        }

        impl $name {
            pub fn values(&self) -> Vec<f64> {
                self.0.values()
            }
        }
    };
}

/// Linear grid `start, ..., stop` with `n` points, or a single value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawAxis {
    Single(f64),
    Range(Range),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl RawAxis {
    fn check(&self, param: &str, lo: f64, hi: f64) -> Result<(), String> {
        let inside = |v: f64| (lo..=hi).contains(&v);
        match self {
            RawAxis::Single(v) if !inside(*v) => Err(format!("{param} = {v} outside [{lo}, {hi}]")),
            RawAxis::Single(_) => Ok(()),
            RawAxis::Range(r) if r.n == 0 => Err(format!("{param} grid is empty (n = 0)")),
            RawAxis::Range(r) if !inside(r.start) || !inside(r.stop) => Err(format!(
                "{param} grid [{}, {}] outside [{lo}, {hi}]",
                r.start, r.stop
            )),
            RawAxis::Range(r) if r.n == 1 && r.start != r.stop => Err(format!(
                "{param} grid with one point needs start == stop, got {} and {}",
                r.start, r.stop
            )),
            RawAxis::Range(_) => Ok(()),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            RawAxis::Single(v) => vec![*v],
            RawAxis::Range(r) if r.n == 1 => vec![r.start],
            RawAxis::Range(r) => {
                let last = (r.n - 1) as f64;
                (0..r.n)
                    .map(|i| {
                        if i == r.n - 1 {
                            r.stop
                        } else {
                            r.start + (r.stop - r.start) * i as f64 / last
                        }
                    })
                    .collect()
            }
        }
    }
}

/// `value` or `start:stop:n`.
impl FromStr for RawAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(RawAxis::Single(parse_f64(v)?)),
            [a, b, n] => Ok(RawAxis::Range(Range {
                start: parse_f64(a)?,
                stop: parse_f64(b)?,
                n: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
            })),
            _ => Err(format!("expected VALUE or START:STOP:N, got {s:?}")),
        }
    }
}

axis_type!(UnitAxis, "probability", 0.0, 1.0);
axis_type!(MuAxis, "mu_bar", -1.0, 1.0);
