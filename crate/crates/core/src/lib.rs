//! Entanglement dynamics of two free two-level atoms whose relative position
//! is quantized.
//!
//! The atoms start in a superposition (or mixture) of both excited and both
//! ground, decay by spontaneous emission, and become entangled through the
//! dissipative dipole-dipole pattern averaged over their distance
//! distribution. The crate evaluates the reduced electronic X-state, its
//! concurrence, the sudden-death and sudden-birth times, and the stationary
//! concurrence carried by the dark state.
//!
//! All physics below [`units`] is in reduced units: `τ = γ₀t`, `x = k₀r`,
//! `ν = (ω−ω₀)/γ₀`.

pub mod concurrence;
pub mod dynamics;
pub mod error;
pub mod pattern;
pub mod quadrature;
pub mod roots;
pub mod units;

pub use concurrence::{
    c1, c2, concurrence_closed, concurrence_xstate, find_critical_times, trace_concurrence,
    ConcurrenceTrace, CriticalTimes,
};
pub use dynamics::{
    evolve_closed_form, sigma_exact, spectral_weight_approx, spectral_weight_exact,
    InitialElectronicState, SigmaExact, SpectralWeight, XState,
};
pub use error::{Error, Result};
pub use pattern::{
    a_spectral, critical_distance, mu, mu_bar, DistributionKind, DistributionSpec,
    MotionDistribution, PatternAverage,
};
pub use units::{reduce_units, validate_regime, AtomPairConfig, DimensionlessScales, RegimeReport};
