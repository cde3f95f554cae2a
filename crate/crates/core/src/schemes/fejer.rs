//! Fourier-basis measurement of a uniform photon-number superposition.

use std::f64::consts::{PI, TAU};

use crate::circular::mod_two_pi;
use crate::error::{invalid, Result};

/// Below this `|sin(x/2)|` the Fejér ratio is replaced by its Taylor value.
const SINGULARITY_GUARD: f64 = 1e-7;

pub(crate) fn check_levels(d: usize) -> Result<()> {
    if d < 2 {
        return invalid(format!("level count d must be at least 2, got {d}"));
    }
    Ok(())
}

/// `F_d(x) / d = sin²(dx/2) / (d² sin²(x/2))`, the probability of outcome
/// `k` when `x = 2πk/d − φ`.
pub(crate) fn fejer_weight(d: usize, x: f64) -> f64 {
    let df = d as f64;
    let half = 0.5 * x;
    let den = half.sin();
    if den.abs() < SINGULARITY_GUARD {
        let r = x - TAU * (x / TAU).round();
        return 1.0 - (df * df - 1.0) * r * r / 12.0;
    }
    let num = (df * half).sin();
    (num * num) / (df * df * den * den)
}

/// Outcome distribution `p_d(k | φ)` for `k = 0, …, d−1`.
pub fn fejer_pmf(d: usize, phi: f64) -> Result<Vec<f64>> {
    check_levels(d)?;
    Ok((0..d).map(|k| fejer_weight(d, TAU * k as f64 / d as f64 - phi)).collect())
}

/// The outcome whose smoothing rectangle covers `phi_hat`:
/// `k = ⌊d (φ̂ mod 2π) / 2π⌋`.
pub fn active_outcome(d: usize, phi_hat: f64) -> usize {
    let k = (d as f64 * mod_two_pi(phi_hat) / TAU).floor() as usize;
    k.min(d - 1)
}

/// Start of outcome `k`'s rectangle after the shift into `[-π, π)`.
pub fn outcome_angle(d: usize, k: usize) -> f64 {
    let a = TAU * k as f64 / d as f64;
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// The rectangle edges `2πk/d`, shifted into `[-π, π)`, in increasing order.
pub fn rectangle_breakpoints(d: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..d).map(|k| crate::circular::wrap_angle(TAU * k as f64 / d as f64)).collect();
    b.sort_by(f64::total_cmp);
    b
}

/// The rectangle `Π_d(x)`: height `d/2π` on `[0, 2π/d)`, zero elsewhere.
pub fn rectangle(d: usize, x: f64) -> f64 {
    if x >= 0.0 && x < TAU / d as f64 {
        d as f64 / TAU
    } else {
        0.0
    }
}

/// `p_d(φ̂ | φ) = Σ_k p_d(k|φ) Π_d(φ̂ − 2πk/d mod 2π)`.
///
/// Exactly one `k` has a non-zero rectangle at any `φ̂`, so the sum
/// collapses to `d/2π · p_d(k*|φ)`.
pub fn smoothed_conditional(d: usize, phi_hat: f64, phi: f64) -> Result<f64> {
    check_levels(d)?;
    let k = active_outcome(d, phi_hat);
    Ok(d as f64 / TAU * fejer_weight(d, TAU * k as f64 / d as f64 - phi))
}
