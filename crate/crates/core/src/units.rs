//! Physical configuration of the atom pair, reduction to dimensionless
//! variables, and the regime-of-validity checks for free atoms.
//!
//! Everything downstream of this module works in reduced units:
//! time `τ = γ₀ t`, distance `x = k₀ r`, detuning `ν = (ω − ω₀)/γ₀`, and the
//! single small parameter `ε_sp = γ₀/ω₀`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant [J s].
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant [J s].
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Above this linewidth-to-frequency ratio the pole approximation gets shaky.
pub const DEFAULT_LINEWIDTH_RATIO_WARN: f64 = 1e-3;
/// Default ratio used to decide a "much greater than" condition.
pub const DEFAULT_STRICT_FACTOR: f64 = 10.0;

const WAVELENGTH_CONSISTENCY: f64 = 1e-6;

/// Physical constants of two identical two-level atoms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomPairConfigFile", into = "AtomPairConfigFile")]
pub struct AtomPairConfig {
    /// Transition angular frequency [rad/s].
    pub omega0: f64,
    /// Natural linewidth [rad/s].
    pub gamma0: f64,
    /// Transition wavelength [m].
    pub lambda0: f64,
    /// Atomic mass [kg].
    pub mass: f64,
    /// Squared sine of the angle between separation vector and the dipoles.
    pub xi: f64,
}

/// On-disk form: either `omega0_rad_s` or `lambda0_m` (or both, if consistent).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomPairConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0_m: Option<f64>,
    pub gamma0_rad_s: f64,
    pub mass_kg: f64,
    pub xi: f64,
}

impl TryFrom<AtomPairConfigFile> for AtomPairConfig {
    type Error = Error;

    fn try_from(raw: AtomPairConfigFile) -> Result<Self> {
        AtomPairConfig::from_parts(
            raw.omega0_rad_s,
            raw.lambda0_m,
            raw.gamma0_rad_s,
            raw.mass_kg,
            raw.xi,
        )
    }
}

impl From<AtomPairConfig> for AtomPairConfigFile {
    fn from(cfg: AtomPairConfig) -> Self {
        Self {
            omega0_rad_s: Some(cfg.omega0),
            lambda0_m: Some(cfg.lambda0),
            gamma0_rad_s: cfg.gamma0,
            mass_kg: cfg.mass,
            xi: cfg.xi,
        }
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl AtomPairConfig {
    /// Builds a configuration from whichever of `omega0` / `lambda0` is known.
    pub fn from_parts(
        omega0: Option<f64>,
        lambda0: Option<f64>,
        gamma0: f64,
        mass: f64,
        xi: f64,
    ) -> Result<Self> {
        let (omega0, lambda0) = match (omega0, lambda0) {
            (Some(w), Some(l)) => {
                require_positive("omega0", w)?;
                require_positive("lambda0", l)?;
                let mismatch = (l * w / (2.0 * PI * SPEED_OF_LIGHT) - 1.0).abs();
                if mismatch >= WAVELENGTH_CONSISTENCY {
                    return Err(Error::Config(format!(
                        "lambda0 and omega0 disagree: lambda0*omega0/(2 pi c) - 1 = {mismatch:.3e}"
                    )));
                }
                (w, l)
            }
            (Some(w), None) => {
                require_positive("omega0", w)?;
                (w, 2.0 * PI * SPEED_OF_LIGHT / w)
            }
            (None, Some(l)) => {
                require_positive("lambda0", l)?;
                (2.0 * PI * SPEED_OF_LIGHT / l, l)
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of omega0 or lambda0 must be given".into(),
                ))
            }
        };
        require_positive("gamma0", gamma0)?;
        require_positive("mass", mass)?;
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::Config(format!("xi must lie in [0, 1], got {xi}")));
        }
        Ok(Self {
            omega0,
            gamma0,
            lambda0,
            mass,
            xi,
        })
    }

    pub fn from_omega0(omega0: f64, gamma0: f64, mass: f64, xi: f64) -> Result<Self> {
        Self::from_parts(Some(omega0), None, gamma0, mass, xi)
    }

    pub fn from_lambda0(lambda0: f64, gamma0: f64, mass: f64, xi: f64) -> Result<Self> {
        Self::from_parts(None, Some(lambda0), gamma0, mass, xi)
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda0
    }

    /// `γ₀/ω₀`.
    pub fn linewidth_ratio(&self) -> f64 {
        self.gamma0 / self.omega0
    }

    /// Warning text when `γ₀/ω₀` exceeds `threshold`.
    pub fn linewidth_warning(&self, threshold: f64) -> Option<String> {
        let ratio = self.linewidth_ratio();
        (ratio > threshold).then(|| {
            format!(
                "gamma0/omega0 = {ratio:.3e} exceeds {threshold:.1e}; pole approximation degraded"
            )
        })
    }
}

/// Scale factors between SI quantities and the reduced variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessScales {
    pub gamma0: f64,
    pub omega0: f64,
    pub k0: f64,
    /// `γ₀/ω₀`.
    pub eps_sp: f64,
}

/// Scale factors for `cfg`.
pub fn reduce_units(cfg: &AtomPairConfig) -> Result<DimensionlessScales> {
    require_positive("omega0", cfg.omega0)?;
    require_positive("gamma0", cfg.gamma0)?;
    require_positive("lambda0", cfg.lambda0)?;
    Ok(DimensionlessScales {
        gamma0: cfg.gamma0,
        omega0: cfg.omega0,
        k0: cfg.k0(),
        eps_sp: cfg.gamma0 / cfg.omega0,
    })
}

impl DimensionlessScales {
    pub fn tau(&self, t: f64) -> f64 {
        self.gamma0 * t
    }

    pub fn time(&self, tau: f64) -> f64 {
        tau / self.gamma0
    }

    pub fn x(&self, r: f64) -> f64 {
        self.k0 * r
    }

    pub fn length(&self, x: f64) -> f64 {
        x / self.k0
    }

    pub fn nu(&self, omega: f64) -> f64 {
        (omega - self.omega0) / self.gamma0
    }

    pub fn omega(&self, nu: f64) -> f64 {
        self.omega0 + self.gamma0 * nu
    }
}

/// One checked inequality: `ratio >= strict_factor` passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub condition: String,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// `(ħ k₀)² / 2m` [J].
    pub recoil_energy: f64,
    /// `√(h / γ₀ m)` [m].
    pub dispersion_length: f64,
    /// `λ₀ √(E_r / ħγ₀)` [m].
    pub dr_lower_bound: f64,
    /// Spread after one excited-state lifetime [m].
    pub dr_final: f64,
    pub strict_factor: f64,
    pub margins: Vec<Margin>,
    pub warnings: Vec<String>,
}

impl RegimeReport {
    pub fn all_pass(&self) -> bool {
        self.margins.iter().all(|m| m.pass)
    }
}

/// Spread of the relative-position wavepacket after dispersing for one lifetime.
pub fn dispersed_spread(dr_initial: f64, dispersion_length: f64) -> f64 {
    dr_initial * (1.0 + (dispersion_length / dr_initial).powi(4)).sqrt()
}

/// Checks that the atoms stay distinguishable while still being resolved
/// below the recoil-limited spread. Failures are reported, not raised.
pub fn validate_regime(
    cfg: &AtomPairConfig,
    rbar: f64,
    dr_initial: f64,
    strict_factor: f64,
) -> Result<RegimeReport> {
    require_positive("rbar", rbar)?;
    require_positive("dr_initial", dr_initial)?;
    require_positive("mass", cfg.mass)?;
    require_positive("gamma0", cfg.gamma0)?;
    require_positive("lambda0", cfg.lambda0)?;
    if !(strict_factor.is_finite() && strict_factor >= 1.0) {
        return Err(Error::Config(format!(
            "strict factor must be >= 1, got {strict_factor}"
        )));
    }

    let p_recoil = HBAR * cfg.k0();
    let recoil_energy = p_recoil * p_recoil / (2.0 * cfg.mass);
    let dispersion_length = (PLANCK / (cfg.gamma0 * cfg.mass)).sqrt();
    let dr_lower_bound = cfg.lambda0 * (recoil_energy / (HBAR * cfg.gamma0)).sqrt();
    let dr_final = dispersed_spread(dr_initial, dispersion_length);

    let margin = |condition: &str, ratio: f64| Margin {
        condition: condition.to_string(),
        ratio,
        pass: ratio >= strict_factor,
    };
    let margins = vec![
        margin("distinguishability: rbar / dr_final", rbar / dr_final),
        margin(
            "recoil bound: dr_initial / dr_lower_bound",
            dr_initial / dr_lower_bound,
        ),
        margin("localization: rbar / dr_initial", rbar / dr_initial),
    ];

    let warnings = cfg
        .linewidth_warning(DEFAULT_LINEWIDTH_RATIO_WARN)
        .into_iter()
        .collect();

    Ok(RegimeReport {
        recoil_energy,
        dispersion_length,
        dr_lower_bound,
        dr_final,
        strict_factor,
        margins,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Rubidium-87 D2 line.
    fn rb87() -> AtomPairConfig {
        AtomPairConfig::from_lambda0(780.241e-9, 2.0 * PI * 6.0666e6, 1.443_160_6e-25, 1.0).unwrap()
    }

    #[test]
    fn unit_time_and_wavelength() {
        let s = reduce_units(&rb87()).unwrap();
        assert_eq!(s.tau(1.0 / s.gamma0), 1.0);
        assert_relative_eq!(s.x(rb87().lambda0), 2.0 * PI, max_relative = 1e-15);
        let t = 3.7e-8;
        assert_relative_eq!(s.time(s.tau(t)), t, max_relative = 1e-12);
    }

    #[test]
    fn omega_and_lambda_are_derived_from_each_other() {
        let a = rb87();
        let b = AtomPairConfig::from_omega0(a.omega0, a.gamma0, a.mass, a.xi).unwrap();
        assert_relative_eq!(a.lambda0, b.lambda0, max_relative = 1e-14);
        assert!(
            AtomPairConfig::from_parts(Some(a.omega0), Some(a.lambda0), a.gamma0, a.mass, 0.0)
                .is_ok()
        );
        assert!(AtomPairConfig::from_parts(
            Some(a.omega0 * 1.001),
            Some(a.lambda0),
            a.gamma0,
            a.mass,
            0.0
        )
        .is_err());
    }

    #[test]
    fn rejects_non_positive_constants() {
        assert!(AtomPairConfig::from_omega0(0.0, 1.0, 1.0, 0.5).is_err());
        assert!(AtomPairConfig::from_omega0(1.0, -1.0, 1.0, 0.5).is_err());
        assert!(AtomPairConfig::from_omega0(1.0, 1e-9, 0.0, 0.5).is_err());
        assert!(AtomPairConfig::from_omega0(1.0, 1e-9, 1.0, 1.5).is_err());
        assert!(AtomPairConfig::from_parts(None, None, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn linewidth_warning_threshold() {
        let ok = AtomPairConfig::from_omega0(1e15, 1e7, 1e-25, 1.0).unwrap();
        assert!(ok.linewidth_warning(DEFAULT_LINEWIDTH_RATIO_WARN).is_none());
        let broad = AtomPairConfig::from_omega0(1e9, 1e7, 1e-25, 1.0).unwrap();
        assert!(broad
            .linewidth_warning(DEFAULT_LINEWIDTH_RATIO_WARN)
            .is_some());
    }

    #[test]
    fn json_accepts_either_frequency_or_wavelength() {
        let cfg: AtomPairConfig = serde_json::from_str(
            r#"{"lambda0_m": 7.8e-7, "gamma0_rad_s": 3.8e7, "mass_kg": 1.44e-25, "xi": 1.0}"#,
        )
        .unwrap();
        assert_relative_eq!(cfg.omega0, 2.0 * PI * SPEED_OF_LIGHT / 7.8e-7);
        let bad = serde_json::from_str::<AtomPairConfig>(
            r#"{"gamma0_rad_s": 3.8e7, "mass_kg": 1.44e-25, "xi": 1.0}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn recoil_and_dispersion_from_definitions() {
        let cfg = rb87();
        let r = validate_regime(&cfg, 1e-6, 1e-7, DEFAULT_STRICT_FACTOR).unwrap();
        let k0 = 2.0 * PI / cfg.lambda0;
        assert_relative_eq!(
            r.recoil_energy,
            (HBAR * k0).powi(2) / (2.0 * cfg.mass),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            r.dispersion_length,
            (PLANCK / (cfg.gamma0 * cfg.mass)).sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn spread_equal_to_dispersion_length_grows_by_sqrt2() {
        let cfg = rb87();
        let ld = validate_regime(&cfg, 1.0, 1.0, 10.0)
            .unwrap()
            .dispersion_length;
        let r = validate_regime(&cfg, 1.0, ld, 10.0).unwrap();
        assert_relative_eq!(r.dr_final, ld * 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn wide_packet_barely_disperses() {
        let cfg = rb87();
        let ld = validate_regime(&cfg, 1.0, 1.0, 10.0)
            .unwrap()
            .dispersion_length;
        let dr = 1e4 * ld;
        let r = validate_regime(&cfg, 1.0, dr, 10.0).unwrap();
        assert!((r.dr_final / dr - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_with_hbar_gamma_hundred_recoils() {
        // lambda0 = 1, m chosen so that E_r = hbar gamma0 / 100.
        let lambda0 = 1.0;
        let gamma0 = 1.0;
        let k0 = 2.0 * PI / lambda0;
        let mass = 50.0 * HBAR * k0 * k0 / gamma0;
        let cfg = AtomPairConfig::from_lambda0(lambda0, gamma0, mass, 1.0).unwrap();
        let r = validate_regime(&cfg, 100.0, 1.0, 10.0).unwrap();
        assert_relative_eq!(r.recoil_energy, HBAR * gamma0 / 100.0, max_relative = 1e-14);
        assert_relative_eq!(r.dr_lower_bound, 0.1, max_relative = 1e-14);
    }

    #[test]
    fn strict_factor_one_passes_borderline() {
        let lambda0 = 1.0;
        let k0 = 2.0 * PI;
        let mass = 50.0 * HBAR * k0 * k0;
        let cfg = AtomPairConfig::from_lambda0(lambda0, 1.0, mass, 1.0).unwrap();
        // dr_initial five times the lower bound: passes at 1, fails at 10.
        let strict = validate_regime(&cfg, 1e6, 0.5, 10.0).unwrap();
        let loose = validate_regime(&cfg, 1e6, 0.5, 1.0).unwrap();
        assert!(!strict.margins[1].pass);
        assert!(loose.margins[1].pass);
        assert_relative_eq!(strict.margins[1].ratio, 5.0, max_relative = 1e-14);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        let cfg = rb87();
        assert!(validate_regime(&cfg, 0.0, 1e-7, 10.0).is_err());
        assert!(validate_regime(&cfg, 1e-6, -1e-7, 10.0).is_err());
        assert!(validate_regime(&cfg, 1e-6, 1e-7, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(
            omega0 in 1e12f64..1e17,
            ratio in 1e-9f64..1e-3,
            t in 1e-12f64..1e-3,
            r in 1e-10f64..1.0,
            omega in 1e12f64..1e17,
        ) {
            let cfg = AtomPairConfig::from_omega0(omega0, omega0 * ratio, 1e-25, 0.5).unwrap();
            let s = reduce_units(&cfg).unwrap();
            prop_assert!((s.time(s.tau(t)) / t - 1.0).abs() < 1e-12);
            prop_assert!((s.length(s.x(r)) / r - 1.0).abs() < 1e-12);
            prop_assert!((s.omega(s.nu(omega)) / omega - 1.0).abs() < 1e-12);
        }

        #[test]
        fn dispersion_never_shrinks(dr in 1e-12f64..1e-3, ld in 1e-12f64..1e-3) {
            prop_assert!(dispersed_spread(dr, ld) >= dr);
        }

        #[test]
        fn larger_rbar_never_breaks_a_pass(
            rbar in 1e-7f64..1e-3,
            grow in 1.0f64..100.0,
            dr in 1e-9f64..1e-6,
        ) {
            let cfg = rb87();
            let a = validate_regime(&cfg, rbar, dr, 10.0).unwrap();
            let b = validate_regime(&cfg, rbar * grow, dr, 10.0).unwrap();
            for (ma, mb) in a.margins.iter().zip(&b.margins) {
                prop_assert!(!ma.pass || mb.pass);
            }
        }
    }
}
