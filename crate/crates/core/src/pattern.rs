//! Dissipative dipole-dipole pattern `μ_ξ(x)` of two parallel dipoles, its
//! average over the inter-atomic distance distribution, and its Lorentzian
//! spectral average.
//!
//! Distances are in units of `1/k₀`, so `x = 2π` is one transition wavelength.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::quadrature::{uniform_breaks, Estimate, Quadrature};
use crate::units::DimensionlessScales;

/// Below this argument `μ_ξ` is evaluated from its Taylor series.
pub const SERIES_SWITCH: f64 = 1e-2;
/// Default half-width of the frequency window, in linewidths.
pub const DEFAULT_WINDOW: f64 = 50.0;
/// Absolute tolerance for distance averages.
pub const AVERAGE_ABS_TOL: f64 = 1e-8;

// Gaussian tails beyond this many standard deviations are below 1e-31.
const GAUSSIAN_REACH: f64 = 12.0;
const MAX_SEGMENTS: usize = 8192;

/// `μ_ξ(x) = (3/2)[(3ξ−2)(cos x/x² − sin x/x³) + ξ sin x/x]`.
///
/// `xi = 1` is the pattern for dipoles perpendicular to the separation,
/// `xi = 0` for dipoles along it. Both equal 1 at `x = 0`.
pub fn mu(xi: f64, x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_SWITCH {
        mu_series(xi, x)
    } else {
        let (s, c) = x.sin_cos();
        // (x cos x − sin x)/x³ loses fewer digits than cos x/x² − sin x/x³.
        let near = (x * c - s) / (x * x * x);
        1.5 * ((3.0 * xi - 2.0) * near + xi * s / x)
    }
}

/// Taylor expansion of `μ_ξ` about `x = 0`, through `x⁶`.
pub fn mu_series(xi: f64, x: f64) -> f64 {
    let x2 = x * x;
    1.0 - (xi + 1.0) / 10.0 * x2 + (2.0 * xi + 1.0) / 280.0 * x2 * x2
        - (3.0 * xi + 1.0) / 15120.0 * x2 * x2 * x2
}

/// Distance `k₀ r_c` beyond which the linewidth washes out the pattern.
pub fn critical_distance(scales: &DimensionlessScales) -> f64 {
    2.0 * PI / scales.eps_sp
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Delta,
    RadialGaussian,
}

/// Probability law of the reduced inter-atomic distance `x = k₀ r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotionDistribution {
    kind: DistributionKind,
    rbar: f64,
    dr: f64,
    norm: f64,
}

impl MotionDistribution {
    pub fn delta(rbar: f64) -> Result<Self> {
        if !(rbar.is_finite() && rbar > 0.0) {
            return Err(Error::Domain(format!(
                "mean distance must be positive, got {rbar}"
            )));
        }
        Ok(Self {
            kind: DistributionKind::Delta,
            rbar,
            dr: 0.0,
            norm: 1.0,
        })
    }

    /// Gaussian in `x`, truncated to `x > 0` and renormalized.
    pub fn radial_gaussian(rbar: f64, dr: f64) -> Result<Self> {
        if !(rbar.is_finite() && rbar > 0.0) {
            return Err(Error::Domain(format!(
                "mean distance must be positive, got {rbar}"
            )));
        }
        if !(dr.is_finite() && dr > 0.0) {
            return Err(Error::Domain(format!(
                "gaussian spread must be positive, got {dr}"
            )));
        }
        let norm = dr * (PI / 2.0).sqrt() * erfc(-rbar / (dr * 2f64.sqrt()));
        Ok(Self {
            kind: DistributionKind::RadialGaussian,
            rbar,
            dr,
            norm,
        })
    }

    pub fn new(kind: DistributionKind, rbar: f64, dr: f64) -> Result<Self> {
        match kind {
            DistributionKind::Delta if dr != 0.0 => Err(Error::Domain(
                "delta distribution must have zero spread".into(),
            )),
            DistributionKind::Delta => Self::delta(rbar),
            DistributionKind::RadialGaussian => Self::radial_gaussian(rbar, dr),
        }
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn rbar(&self) -> f64 {
        self.rbar
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    /// Probability density at `x`; zero for the delta law.
    pub fn density(&self, x: f64) -> f64 {
        match self.kind {
            DistributionKind::Delta => 0.0,
            DistributionKind::RadialGaussian if x < 0.0 => 0.0,
            DistributionKind::RadialGaussian => {
                let z = (x - self.rbar) / self.dr;
                (-0.5 * z * z).exp() / self.norm
            }
        }
    }

    /// Interval outside of which the density is negligible.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            DistributionKind::Delta => (self.rbar, self.rbar),
            DistributionKind::RadialGaussian => (
                (self.rbar - GAUSSIAN_REACH * self.dr).max(0.0),
                self.rbar + GAUSSIAN_REACH * self.dr,
            ),
        }
    }
}

/// File form of a distance distribution, in units of the wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub rbar_over_lambda0: f64,
    #[serde(default)]
    pub dr_over_lambda0: f64,
}

impl DistributionSpec {
    pub fn to_distribution(&self) -> Result<MotionDistribution> {
        MotionDistribution::new(
            self.kind,
            2.0 * PI * self.rbar_over_lambda0,
            2.0 * PI * self.dr_over_lambda0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageMethod {
    /// Pattern taken at the line centre, `Ā ≈ μ̄(k₀r)`.
    NearFieldApprox,
    /// Full Lorentzian-weighted spectral average inside the window.
    FullSpectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternAverage {
    pub mu_bar: f64,
    pub method: AverageMethod,
    pub est_error: f64,
}

fn segments_for(lower: f64, upper: f64, period: f64) -> Vec<f64> {
    let n = ((upper - lower) / period)
        .ceil()
        .clamp(1.0, MAX_SEGMENTS as f64) as usize;
    uniform_breaks(lower, upper, n)
}

/// `∫ density(x) μ_ξ(x) dx` over `[lower, upper]`, split into half-period panels.
pub fn average_pattern<D>(
    xi: f64,
    density: D,
    lower: f64,
    upper: f64,
    quad: &Quadrature,
) -> Result<Estimate>
where
    D: Fn(f64) -> f64,
{
    let breaks = segments_for(lower, upper, PI);
    quad.integrate_segments(|x| density(x) * mu(xi, x), &breaks)
}

/// Average of `μ_ξ` over the distance law `w`, taking the pattern at line centre.
pub fn mu_bar(xi: f64, w: &MotionDistribution) -> Result<PatternAverage> {
    mu_bar_with(xi, w, &Quadrature::with_abs_tol(AVERAGE_ABS_TOL))
}

pub fn mu_bar_with(xi: f64, w: &MotionDistribution, quad: &Quadrature) -> Result<PatternAverage> {
    check_xi(xi)?;
    match w.kind {
        DistributionKind::Delta => Ok(PatternAverage {
            mu_bar: mu(xi, w.rbar),
            method: AverageMethod::NearFieldApprox,
            est_error: 0.0,
        }),
        DistributionKind::RadialGaussian => {
            let (lo, hi) = w.support();
            let est = average_pattern(xi, |x| w.density(x), lo, hi, quad)?;
            Ok(PatternAverage {
                mu_bar: est.value,
                method: AverageMethod::NearFieldApprox,
                est_error: est.error,
            })
        }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if (0.0..=1.0).contains(&xi) {
        Ok(())
    } else {
        Err(Error::Domain(format!("xi must lie in [0, 1], got {xi}")))
    }
}

/// Result of a Lorentzian window average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowAverage {
    pub value: f64,
    pub est_error: f64,
    /// True when the lower window edge was moved up to `ω = 0`.
    pub clipped: bool,
}

/// `(1/M) ∫ L(ν) (1+ε ν)³ g(ν) dν` over `ν ∈ [−W, W]`, with `L` the unit-area
/// Lorentzian and `M` its mass inside the window.
///
/// `oscillation` is the largest angular frequency of `g` in `ν`; it sets the
/// initial panel width.
pub fn lorentzian_window_average<G>(
    g: G,
    eps_sp: f64,
    window: f64,
    oscillation: f64,
    quad: &Quadrature,
) -> Result<WindowAverage>
where
    G: Fn(f64) -> f64,
{
    if !(eps_sp > 0.0 && eps_sp < 1e-2) {
        return Err(Error::Domain(format!(
            "linewidth ratio must lie in (0, 1e-2), got {eps_sp}"
        )));
    }
    if !(window.is_finite() && window >= 10.0) {
        return Err(Error::Domain(format!(
            "window must be >= 10 linewidths, got {window}"
        )));
    }
    // ω = ω₀(1 + ε ν) > 0 requires ν > −1/ε.
    let floor = -1.0 / eps_sp;
    let clipped = -window <= floor;
    let lower = if clipped { floor } else { -window };
    let upper = window;

    let mass = (upper.atan() - lower.atan()) / PI;
    let period = PI / (1.0 + oscillation.abs());
    let mut breaks = segments_for(lower, upper, period.min(2.0));
    if !breaks.contains(&0.0) && lower < 0.0 {
        breaks.push(0.0);
        breaks.sort_by(f64::total_cmp);
    }
    let est = quad.integrate_segments(
        |nu| {
            let s = 1.0 + eps_sp * nu;
            g(nu) * s * s * s / (PI * (1.0 + nu * nu))
        },
        &breaks,
    )?;
    Ok(WindowAverage {
        value: est.value / mass,
        est_error: est.error / mass,
        clipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralAverage {
    pub value: f64,
    pub est_error: f64,
    /// `|A(W) − A(2W)|`.
    pub window_sensitivity: f64,
    pub clipped: bool,
}

fn spectral_quadrature() -> Quadrature {
    Quadrature {
        abs_tol: 1e-11,
        rel_tol: 0.0,
        max_subdivisions: 100_000,
    }
}

/// Lorentzian-weighted average of `μ_ξ(x ω/ω₀)` over a window of `±window`
/// linewidths. Reduces to `mu(xi, x)` as `eps_sp → 0`.
pub fn a_spectral(xi: f64, x: f64, eps_sp: f64, window: f64) -> Result<SpectralAverage> {
    check_xi(xi)?;
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must be non-negative, got {x}"
        )));
    }
    let quad = spectral_quadrature();
    let g = |nu: f64| mu(xi, x * (1.0 + eps_sp * nu));
    let base = lorentzian_window_average(g, eps_sp, window, x * eps_sp, &quad)?;
    let wide = lorentzian_window_average(g, eps_sp, 2.0 * window, x * eps_sp, &quad)?;
    Ok(SpectralAverage {
        value: base.value,
        est_error: base.est_error,
        window_sensitivity: (base.value - wide.value).abs(),
        clipped: base.clipped || wide.clipped,
    })
}

/// Distance average of [`a_spectral`] over `w`.
pub fn mu_bar_spectral(
    xi: f64,
    w: &MotionDistribution,
    eps_sp: f64,
    window: f64,
) -> Result<PatternAverage> {
    check_xi(xi)?;
    match w.kind {
        DistributionKind::Delta => {
            let a = a_spectral(xi, w.rbar, eps_sp, window)?;
            Ok(PatternAverage {
                mu_bar: a.value,
                method: AverageMethod::FullSpectral,
                est_error: a.est_error,
            })
        }
        DistributionKind::RadialGaussian => {
            let inner = spectral_quadrature();
            let (lo, hi) = w.support();
            let breaks = segments_for(lo, hi, PI);
            let failure = std::cell::RefCell::new(None);
            let est = Quadrature::with_abs_tol(AVERAGE_ABS_TOL).integrate_segments(
                |x| {
                    let g = |nu: f64| mu(xi, x * (1.0 + eps_sp * nu));
                    match lorentzian_window_average(g, eps_sp, window, x * eps_sp, &inner) {
                        Ok(a) => w.density(x) * a.value,
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            0.0
                        }
                    }
                },
                &breaks,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok(PatternAverage {
                mu_bar: est.value,
                method: AverageMethod::FullSpectral,
                est_error: est.error,
            })
        }
    }
}
