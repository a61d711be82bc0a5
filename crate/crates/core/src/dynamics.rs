//! Reduced electronic density matrix of the atom pair in X form.
//!
//! Basis order is `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`. Only the diagonal and the two
//! anti-diagonal coherences are populated: `ρ_eg` between `|↑↑⟩` and `|↓↓⟩`,
//! and `σ_+−` inside the single-excitation block.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{lorentzian_window_average, mu, DistributionKind, MotionDistribution};
use crate::quadrature::{uniform_breaks, Quadrature};

const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-12;

/// Initial state `p |↑↑⟩⟨↑↑| + (1−p)|↓↓⟩⟨↓↓| + q√(p(1−p)) (|↑↑⟩⟨↓↓| + h.c.)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialElectronicState {
    p: f64,
    q: f64,
}

impl InitialElectronicState {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!("q must lie in [0, 1], got {q}")));
        }
        Ok(Self { p, q })
    }

    /// Excited-state probability.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Coherence degradation factor; `q = 1` is the pure state.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coherence(&self) -> f64 {
        self.q * (self.p * (1.0 - self.p)).sqrt()
    }

    pub fn to_xstate(&self) -> XState {
        evolve_closed_form(self, 0.0, 0.0)
    }
}

/// The optical carrier `e^{−2iω₀t}` carried by `ρ_eg`.
///
/// It is kept symbolic: only `|ρ_eg|` enters the concurrence, and evaluating
/// `cos(2ω₀t)` with `ω₀/γ₀ ~ 10⁸` would be pure rounding noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierPhase {
    /// Reduced time `γ₀ t` at which the carrier is to be evaluated.
    pub tau: f64,
}

/// `|ρ_eg|` times a unit-modulus carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coherence {
    pub modulus: f64,
    pub carrier: CarrierPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XState {
    pub rho_ee: f64,
    pub rho_eg: Coherence,
    pub sigma_pp: f64,
    pub sigma_mm: f64,
    pub sigma_pm: Complex64,
    pub rho_gg: f64,
}

impl XState {
    pub fn trace(&self) -> f64 {
        self.rho_ee + self.sigma_pp + self.sigma_mm + self.rho_gg
    }

    /// Checks unit trace, positivity of both 2×2 blocks and exchange symmetry.
    pub fn check(&self) -> Result<()> {
        let diag = [self.rho_ee, self.sigma_pp, self.sigma_mm, self.rho_gg];
        if diag.iter().any(|d| !d.is_finite() || *d < -POSITIVITY_TOL) {
            return Err(Error::Domain(format!(
                "negative or non-finite population in {self:?}"
            )));
        }
        if (self.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::Domain(format!(
                "trace {} differs from 1",
                self.trace()
            )));
        }
        let outer = self.rho_eg.modulus;
        if outer * outer > self.rho_ee * self.rho_gg + POSITIVITY_TOL {
            return Err(Error::Domain(format!(
                "|rho_eg|^2 = {} exceeds rho_ee rho_gg = {}",
                outer * outer,
                self.rho_ee * self.rho_gg
            )));
        }
        if self.sigma_pm.norm_sqr() > self.sigma_pp * self.sigma_mm + POSITIVITY_TOL {
            return Err(Error::Domain(format!(
                "|sigma_pm|^2 = {} exceeds sigma_pp sigma_mm = {}",
                self.sigma_pm.norm_sqr(),
                self.sigma_pp * self.sigma_mm
            )));
        }
        if (self.sigma_pp - self.sigma_mm).abs() > POSITIVITY_TOL {
            return Err(Error::Domain(
                "single-excitation populations differ; exchange symmetry broken".into(),
            ));
        }
        Ok(())
    }

    /// Dense 4×4 matrix with the optical carrier removed (rotating frame).
    pub fn to_matrix_rotating(&self) -> [[Complex64; 4]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let r = |v: f64| Complex64::new(v, 0.0);
        let eg = r(self.rho_eg.modulus);
        [
            [r(self.rho_ee), z, z, eg],
            [z, r(self.sigma_pp), self.sigma_pm, z],
            [z, self.sigma_pm.conj(), r(self.sigma_mm), z],
            [eg, z, z, r(self.rho_gg)],
        ]
    }
}

/// Closed-form state at reduced time `tau`, with the line-centre pattern
/// average `mu_bar` coupling the two single-excitation states.
///
/// With `ε = e^{−τ}`: `ρ_ee = pε²`, `|ρ_eg| = q√(p(1−p)) ε`,
/// `σ_±± = (p/4)(1−ε)²`, `σ_+− = (p/4) μ̄ (1−ε)²`.
/// Requires `tau >= 0` and `|mu_bar| <= 1`.
pub fn evolve_closed_form(init: &InitialElectronicState, mu_bar: f64, tau: f64) -> XState {
    let p = init.p;
    let eps = (-tau).exp();
    let rise = (1.0 - eps) * (1.0 - eps);
    let rho_ee = p * eps * eps;
    let sigma = 0.25 * p * rise;
    XState {
        rho_ee,
        rho_eg: Coherence {
            modulus: init.coherence() * eps,
            carrier: CarrierPhase { tau },
        },
        sigma_pp: sigma,
        sigma_mm: sigma,
        sigma_pm: Complex64::new(0.25 * p * mu_bar * rise, 0.0),
        rho_gg: 1.0 - rho_ee - 2.0 * sigma,
    }
}

/// Unit-area Lorentzian in reduced detuning.
pub fn lorentzian(nu: f64) -> f64 {
    1.0 / (std::f64::consts::PI * (1.0 + nu * nu))
}

/// `(γ₀/π)|g(ω,t)|²` in reduced variables: a Lorentzian modulated by a damped
/// oscillation, `L(ν)(1 + e^{−2τ} − 2 cos(ντ) e^{−τ})`.
pub fn spectral_weight_exact(nu: f64, tau: f64) -> f64 {
    let e = (-tau).exp();
    lorentzian(nu) * (1.0 + e * e - 2.0 * (nu * tau).cos() * e)
}

/// Single-time-scale approximation `L(ν)(1 − e^{−τ})²`.
pub fn spectral_weight_approx(nu: f64, tau: f64) -> f64 {
    let rise = 1.0 - (-tau).exp();
    lorentzian(nu) * rise * rise
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Exact,
    Approx,
}

/// Spectral weight sampled on a detuning grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralWeight {
    pub tau: f64,
    pub mode: WeightMode,
    pub nu: Vec<f64>,
    pub values: Vec<f64>,
}

impl SpectralWeight {
    pub fn sample(nu: &[f64], tau: f64, mode: WeightMode) -> Self {
        let f = match mode {
            WeightMode::Exact => spectral_weight_exact,
            WeightMode::Approx => spectral_weight_approx,
        };
        Self {
            tau,
            mode,
            nu: nu.to_vec(),
            values: nu.iter().map(|&v| f(v, tau)).collect(),
        }
    }
}

/// Single-excitation elements from the windowed spectral integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaExact {
    pub sigma_diag: f64,
    pub sigma_offdiag: f64,
    pub diag_error: f64,
    pub offdiag_error: f64,
    /// Largest change of either element when the window is doubled.
    pub window_sensitivity: f64,
}

/// `σ_±±(τ)` and `σ_±∓(τ)` from the full spectral weight, keeping the `ω³`
/// factor and the oscillating term the closed form drops. Used to check
/// [`evolve_closed_form`].
pub fn sigma_exact(
    init: &InitialElectronicState,
    xi: f64,
    w: &MotionDistribution,
    eps_sp: f64,
    tau: f64,
    window: f64,
) -> Result<SigmaExact> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain(format!(
            "tau must be non-negative, got {tau}"
        )));
    }
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::Domain(format!("xi must lie in [0, 1], got {xi}")));
    }
    let prefactor = 0.25 * init.p;
    let quad = Quadrature {
        abs_tol: 1e-11,
        rel_tol: 0.0,
        max_subdivisions: 100_000,
    };
    let time_factor = |nu: f64| {
        let e = (-tau).exp();
        1.0 + e * e - 2.0 * (nu * tau).cos() * e
    };

    // Distance average of μ_ξ at the scaled argument x(1 + εν).
    let scaled_pattern: Box<dyn Fn(f64) -> f64> = match w.kind() {
        DistributionKind::Delta => {
            let x = w.rbar();
            Box::new(move |nu: f64| mu(xi, x * (1.0 + eps_sp * nu)))
        }
        DistributionKind::RadialGaussian => {
            let (lo, hi) = w.support();
            let n = ((hi - lo) / std::f64::consts::PI).ceil().clamp(1.0, 4096.0) as usize;
            let breaks = uniform_breaks(lo, hi, n);
            let inner = Quadrature::with_abs_tol(1e-10);
            let w = *w;
            Box::new(move |nu: f64| {
                let s = 1.0 + eps_sp * nu;
                inner
                    .integrate_segments(|x| w.density(x) * mu(xi, x * s), &breaks)
                    .map(|e| e.value)
                    .unwrap_or(f64::NAN)
            })
        }
    };
    let reach = w.support().1 * eps_sp;

    let run = |window: f64| -> Result<(f64, f64, f64, f64)> {
        let d = lorentzian_window_average(time_factor, eps_sp, window, tau, &quad)?;
        let o = lorentzian_window_average(
            |nu| time_factor(nu) * scaled_pattern(nu),
            eps_sp,
            window,
            tau + reach,
            &quad,
        )?;
        if !o.value.is_finite() {
            return Err(Error::Numerical(
                "distance average failed inside spectral integral".into(),
            ));
        }
        Ok((d.value, d.est_error, o.value, o.est_error))
    };
    let (d, de, o, oe) = run(window)?;
    let (d2, _, o2, _) = run(2.0 * window)?;

    Ok(SigmaExact {
        sigma_diag: prefactor * d,
        sigma_offdiag: prefactor * o,
        diag_error: prefactor * de,
        offdiag_error: prefactor * oe,
        window_sensitivity: prefactor * (d - d2).abs().max((o - o2).abs()),
    })
}
