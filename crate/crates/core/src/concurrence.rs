//! Concurrence of the X-state, its two component functions in the variable
//! `ε = e^{−τ}`, the sudden death / birth times and the stationary value.

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_closed_form, InitialElectronicState, XState};
use crate::error::{Error, Result};
use crate::roots::{bisect, scan_sign_changes, uniform_grid, Bracket};

/// Number of uniform intervals used to bracket zeros on `ε ∈ [0, 1]`.
pub const SCAN_POINTS: usize = 1000;
/// Width of the final bisection bracket in `ε`.
pub const ROOT_TOL: f64 = 1e-12;

const RADICAND_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-12;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn check_mu_bar(mu_bar: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&mu_bar) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "mu_bar must lie in [-1, 1], got {mu_bar}"
        )))
    }
}

/// `|ρ_eg| − √(σ_++ σ_−−)` as a function of `ε`.
pub fn c1(eps: f64, p: f64, q: f64) -> f64 {
    q * (p * (1.0 - p)).sqrt() * eps - 0.25 * p * (1.0 - eps) * (1.0 - eps)
}

/// `|σ_+−| − √(ρ_ee ρ_gg)` as a function of `ε`. Independent of `q`.
///
/// The coupling enters through `|μ̄|`, so a negative pattern average
/// entangles exactly like its magnitude.
pub fn c2(eps: f64, p: f64, mu_bar: f64) -> Result<f64> {
    let radicand = p * (1.0 - 0.5 * p + p * eps - 1.5 * p * eps * eps);
    if radicand < -RADICAND_TOL {
        return Err(Error::Numerical(format!(
            "negative radicand {radicand:.3e} in c2 at eps = {eps}, p = {p}"
        )));
    }
    Ok(0.25 * p * mu_bar.abs() * (1.0 - eps) * (1.0 - eps) - eps * radicand.max(0.0).sqrt())
}

/// `2 max{0, c1, c2}` from the closed-form component functions.
pub fn concurrence_closed(eps: f64, p: f64, q: f64, mu_bar: f64) -> Result<f64> {
    Ok(2.0 * 0.0f64.max(c1(eps, p, q)).max(c2(eps, p, mu_bar)?))
}

/// Wootters concurrence of an X-state.
pub fn concurrence_xstate(state: &XState) -> Result<f64> {
    state.check()?;
    let outer = state.rho_eg.modulus - (state.sigma_pp * state.sigma_mm).sqrt();
    let inner = state.sigma_pm.norm() - (state.rho_ee * state.rho_gg).sqrt();
    Ok(2.0 * 0.0f64.max(outer).max(inner))
}

/// Sudden death (`ε₁`) and birth (`ε₂`) points and the asymptotic concurrence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalTimes {
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    /// `−ln ε₁`, in units of `1/γ₀`.
    pub t1: Option<f64>,
    /// `−ln ε₂`, in units of `1/γ₀`.
    pub t2: Option<f64>,
    pub esd_occurs: bool,
    pub esb_occurs: bool,
    pub c_stationary: f64,
    /// Set for `μ̄ < 0`, a regime outside the usual positive-pattern analysis.
    pub extrapolated: bool,
}

impl CriticalTimes {
    /// Length of the disentangled window `t₂ − t₁`, when both events occur.
    pub fn dark_window(&self) -> Option<f64> {
        match (self.esd_occurs, self.esb_occurs, self.t1, self.t2) {
            (true, true, Some(t1), Some(t2)) => Some(t2 - t1),
            _ => None,
        }
    }
}

fn unique_root<F>(f: F, name: &str) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64> + Copy,
{
    let grid = uniform_grid(0.0, 1.0, SCAN_POINTS);
    let brackets = scan_sign_changes(f, &grid)?;
    match brackets.as_slice() {
        [] => Ok(None),
        [b] => bisect(f, *b, ROOT_TOL).map(Some),
        many => Err(Error::InvariantViolation(format!(
            "{name} changes sign {} times on (0, 1]; expected at most one (brackets {:?})",
            many.len(),
            many.iter()
                .map(|b: &Bracket| (b.lower, b.upper))
                .collect::<Vec<_>>()
        ))),
    }
}

/// Locates the unique zeros of `c1` and `c2` on `ε ∈ (0, 1)`.
///
/// A zero that only touches an endpoint (`c1` at `ε = 1` when the initial
/// state is unentangled, `c2` at `ε = 0` when `μ̄ = 0`) is not an event.
pub fn find_critical_times(p: f64, q: f64, mu_bar: f64) -> Result<CriticalTimes> {
    check_unit("p", p)?;
    check_unit("q", q)?;
    check_mu_bar(mu_bar)?;

    let f1 = move |e: f64| Ok(c1(e, p, q));
    let f2 = move |e: f64| c2(e, p, mu_bar);
    let eps1 = unique_root(f1, "c1")?;
    let eps2 = unique_root(f2, "c2")?;

    // C(0) > 0 and C really reaches zero at ε₁ (c2 not yet positive there).
    let esd_occurs = match eps1 {
        Some(e1) => c1(1.0, p, q) > 0.0 && c2(e1, p, mu_bar)? <= CONSISTENCY_TOL,
        None => false,
    };
    // c2 rises through zero towards ε → 0, i.e. later in time.
    let esb_occurs = match eps2 {
        Some(_) => mu_bar != 0.0 && c2(0.0, p, mu_bar)? > 0.0,
        None => false,
    };

    if let (Some(e1), Some(e2)) = (eps1, eps2) {
        if e1 < e2 - ROOT_TOL {
            return Err(Error::InvariantViolation(format!(
                "zeros out of order: eps1 = {e1} < eps2 = {e2} (p = {p}, q = {q}, mu_bar = {mu_bar})"
            )));
        }
    }

    Ok(CriticalTimes {
        eps1,
        eps2,
        t1: eps1.map(|e| -e.ln()),
        t2: eps2.map(|e| -e.ln()),
        esd_occurs,
        esb_occurs,
        c_stationary: 0.5 * p * mu_bar.abs(),
        extrapolated: mu_bar < 0.0,
    })
}

/// Zeros of a component function on the closed interval `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCensus {
    /// Strict sign changes between scan points.
    pub sign_changes: usize,
    /// Endpoints `ε = 0` or `ε = 1` where the function is exactly zero.
    pub boundary_zeros: usize,
}

impl ZeroCensus {
    pub fn total(&self) -> usize {
        self.sign_changes + self.boundary_zeros
    }
}

fn census<F>(f: F, n: usize) -> Result<ZeroCensus>
where
    F: Fn(f64) -> Result<f64> + Copy,
{
    let grid = uniform_grid(0.0, 1.0, n);
    let sign_changes = scan_sign_changes(f, &grid)?.len();
    let boundary_zeros = [0.0, 1.0]
        .into_iter()
        .map(f)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|v| *v == 0.0)
        .count();
    Ok(ZeroCensus {
        sign_changes,
        boundary_zeros,
    })
}

/// Zero count of `c1` on `[0, 1]` using `n` scan intervals.
pub fn census_c1(p: f64, q: f64, n: usize) -> Result<ZeroCensus> {
    census(move |e| Ok(c1(e, p, q)), n)
}

/// Zero count of `c2` on `[0, 1]` using `n` scan intervals.
pub fn census_c2(p: f64, mu_bar: f64, n: usize) -> Result<ZeroCensus> {
    census(move |e| c2(e, p, mu_bar), n)
}

/// Concurrence and its components sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceTrace {
    pub tau: Vec<f64>,
    pub eps: Vec<f64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub concurrence: Vec<f64>,
    pub states: Vec<XState>,
}

impl ConcurrenceTrace {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

/// Evolves `init` over `tau_grid` and evaluates the concurrence both from the
/// component functions and from the density matrix; the two must agree.
pub fn trace_concurrence(
    init: &InitialElectronicState,
    mu_bar: f64,
    tau_grid: &[f64],
) -> Result<ConcurrenceTrace> {
    check_mu_bar(mu_bar)?;
    if tau_grid.is_empty() {
        return Err(Error::Domain("time grid is empty".into()));
    }
    if tau_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Domain(
            "time grid must be finite and non-negative".into(),
        ));
    }
    if tau_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "time grid must be strictly increasing".into(),
        ));
    }

    let (p, q) = (init.p(), init.q());
    let n = tau_grid.len();
    let mut trace = ConcurrenceTrace {
        tau: tau_grid.to_vec(),
        eps: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        c2: Vec::with_capacity(n),
        concurrence: Vec::with_capacity(n),
        states: Vec::with_capacity(n),
    };
    for &tau in tau_grid {
        let eps = (-tau).exp();
        let a = c1(eps, p, q);
        let b = c2(eps, p, mu_bar)?;
        let closed = 2.0 * 0.0f64.max(a).max(b);
        let state = evolve_closed_form(init, mu_bar, tau);
        let from_matrix = concurrence_xstate(&state)?;
        if (closed - from_matrix).abs() > CONSISTENCY_TOL {
            return Err(Error::InvariantViolation(format!(
                "closed-form concurrence {closed} differs from matrix value {from_matrix} at tau = {tau}"
            )));
        }
        trace.eps.push(eps);
        trace.c1.push(a);
        trace.c2.push(b);
        trace.concurrence.push(closed);
        trace.states.push(state);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const ESD_HALF: f64 = 0.171_572_875_253_809_9; // 3 − 2√2

    #[test]
    fn c1_values() {
        assert_abs_diff_eq!(c1(1.0, 0.3, 0.6), 0.6 * (0.21f64).sqrt(), epsilon = 1e-16);
        assert_abs_diff_eq!(c1(3.0 - 2.0 * 2f64.sqrt(), 0.5, 1.0), 0.0, epsilon = 1e-15);
        for e in [0.0, 0.2, 1.0] {
            assert_eq!(c1(e, 0.0, 0.7), 0.0);
        }
    }

    #[test]
    fn c2_values() {
        assert_eq!(c2(1.0, 1.0, 0.3).unwrap(), 0.0);
        assert_abs_diff_eq!(c2(0.0, 0.6, 0.8).unwrap(), 0.6 * 0.8 / 4.0, epsilon = 1e-16);
        assert!(c2(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn radicand_nonnegative_on_grid() {
        for i in 0..=200 {
            for j in 0..=200 {
                let p = i as f64 / 200.0;
                let e = j as f64 / 200.0;
                assert!(1.0 - 0.5 * p + p * e - 1.5 * p * e * e >= 0.0);
            }
        }
    }

    #[test]
    fn c2_ignores_q_bitwise() {
        let t0 = find_critical_times(0.4, 0.3, 0.6).unwrap();
        let t1 = find_critical_times(0.4, 1.0, 0.6).unwrap();
        assert_eq!(t0.eps2.unwrap().to_bits(), t1.eps2.unwrap().to_bits());
    }

    #[test]
    fn maximally_entangled_critical_points() {
        let ct = find_critical_times(0.5, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(ct.eps1.unwrap(), ESD_HALF, epsilon = 1e-11);
        assert_abs_diff_eq!(ct.t1.unwrap(), 1.762_747_174_039_087, epsilon = 1e-10);
        // Independent bisection with scipy brentq gives 0.14417583533722308.
        assert_abs_diff_eq!(ct.eps2.unwrap(), 0.144_175_835_337_223, epsilon = 1e-11);
        assert!(ct.esd_occurs && ct.esb_occurs);
        assert_abs_diff_eq!(ct.c_stationary, 0.25, epsilon = 1e-16);
    }

    #[test]
    fn ground_state_has_no_events() {
        let ct = find_critical_times(0.0, 1.0, 1.0).unwrap();
        assert_eq!(ct.eps1, None);
        assert_eq!(ct.eps2, None);
        assert!(!ct.esd_occurs && !ct.esb_occurs);
        assert_eq!(ct.c_stationary, 0.0);
    }

    #[test]
    fn doubly_excited_births_without_death() {
        let ct = find_critical_times(1.0, 1.0, 1.0).unwrap();
        assert!(!ct.esd_occurs);
        assert!(ct.esb_occurs);
        // c2 = (1−ε)[(1−ε)/4 − ε√(1/2 + 3ε/2)] vanishes at ε = 1/5.
        assert_abs_diff_eq!(ct.eps2.unwrap(), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(ct.c_stationary, 0.5, epsilon = 1e-16);
    }

    #[test]
    fn zero_pattern_never_revives() {
        let ct = find_critical_times(0.5, 1.0, 0.0).unwrap();
        assert!(ct.esd_occurs);
        assert!(!ct.esb_occurs);
        assert_eq!(ct.eps2, None);
        let census = census_c2(0.5, 0.0, SCAN_POINTS).unwrap();
        assert_eq!(
            census,
            ZeroCensus {
                sign_changes: 0,
                boundary_zeros: 1
            }
        );
    }

    #[test]
    fn negative_pattern_is_flagged() {
        let neg = find_critical_times(0.5, 1.0, -0.4).unwrap();
        let pos = find_critical_times(0.5, 1.0, 0.4).unwrap();
        assert!(neg.extrapolated && !pos.extrapolated);
        assert_eq!(neg.eps2, pos.eps2);
        assert_eq!(neg.c_stationary, pos.c_stationary);
    }

    #[test]
    fn unentangled_mixed_start_has_no_death() {
        let ct = find_critical_times(0.5, 0.0, 0.5).unwrap();
        assert_eq!(ct.eps1, None);
        assert!(!ct.esd_occurs);
        assert!(ct.esb_occurs);
    }

    #[test]
    fn domain_errors() {
        assert!(find_critical_times(1.2, 1.0, 0.0).is_err());
        assert!(find_critical_times(0.5, -0.1, 0.0).is_err());
        assert!(find_critical_times(0.5, 1.0, 1.5).is_err());
    }

    #[test]
    fn xstate_concurrence_examples() {
        let bell = InitialElectronicState::new(0.5, 1.0).unwrap().to_xstate();
        assert_abs_diff_eq!(concurrence_xstate(&bell).unwrap(), 1.0, epsilon = 1e-15);

        let mixed = InitialElectronicState::new(1.0, 1.0).unwrap();
        let diag = evolve_closed_form(&mixed, 0.0, 1.3);
        assert_eq!(concurrence_xstate(&diag).unwrap(), 0.0);

        let dark = evolve_closed_form(&InitialElectronicState::new(0.5, 1.0).unwrap(), 1.0, 60.0);
        assert_abs_diff_eq!(concurrence_xstate(&dark).unwrap(), 0.25, epsilon = 1e-15);

        let mut broken = bell;
        broken.rho_gg = 0.9;
        assert!(concurrence_xstate(&broken).is_err());
    }

    #[test]
    fn trace_starts_at_initial_concurrence() {
        let init = InitialElectronicState::new(0.5, 0.3).unwrap();
        let grid: Vec<f64> = (0..=500).map(|i| i as f64 * 0.02).collect();
        let tr = trace_concurrence(&init, 1.0, &grid).unwrap();
        assert_abs_diff_eq!(tr.concurrence[0], 0.3, epsilon = 1e-15);
        assert_eq!(tr.len(), 501);
    }

    #[test]
    fn trace_rejects_bad_grid() {
        let init = InitialElectronicState::new(0.5, 1.0).unwrap();
        assert!(trace_concurrence(&init, 1.0, &[]).is_err());
        assert!(trace_concurrence(&init, 1.0, &[0.0, 0.0]).is_err());
        assert!(trace_concurrence(&init, 1.0, &[-1.0, 0.0]).is_err());
        assert!(trace_concurrence(&init, 2.0, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn window_shrinks_with_pattern() {
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let mut prev = f64::INFINITY;
            for k in 1..=20 {
                let mu = k as f64 / 20.0;
                let w = find_critical_times(p, 1.0, mu)
                    .unwrap()
                    .dark_window()
                    .unwrap();
                assert!(w <= prev + 1e-9, "p = {p}, mu = {mu}");
                prev = w;
            }
        }
    }

    proptest! {
        #[test]
        fn ordering_and_uniqueness(p in 0.001f64..0.999, q in 0.001f64..=1.0, mu_bar in 0.0f64..=1.0) {
            let ct = find_critical_times(p, q, mu_bar).unwrap();
            prop_assert!(ct.esd_occurs);
            if let (Some(e1), Some(e2)) = (ct.eps1, ct.eps2) {
                prop_assert!(e1 >= e2);
            }
        }

        #[test]
        fn closed_form_matches_matrix(
            p in 0.0f64..=1.0,
            q in 0.0f64..=1.0,
            mu_bar in -1.0f64..=1.0,
            tau in 0.0f64..30.0,
        ) {
            let init = InitialElectronicState::new(p, q).unwrap();
            let from_matrix = concurrence_xstate(&evolve_closed_form(&init, mu_bar, tau)).unwrap();
            let closed = concurrence_closed((-tau).exp(), p, q, mu_bar).unwrap();
            prop_assert!((from_matrix - closed).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&closed));
        }
    }
}
