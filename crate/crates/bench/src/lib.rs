//! Inputs shared by the benchmarks.

use pairglow_core::MotionDistribution;

pub fn tau_grid(tau_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| tau_max * i as f64 / n as f64).collect()
}

/// Points `(p, q, mu_bar)` of a small sweep.
pub fn sweep_points(n: usize) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for k in 0..n {
            out.push((
                i as f64 / (n + 1) as f64,
                1.0,
                k as f64 / (n - 1).max(1) as f64,
            ));
        }
    }
    out
}

/// A wavepacket one wavelength wide at a few wavelengths separation.
pub fn packet() -> MotionDistribution {
    MotionDistribution::radial_gaussian(
        2.0 * std::f64::consts::PI * 3.0,
        2.0 * std::f64::consts::PI,
    )
    .expect("valid distribution")
}
