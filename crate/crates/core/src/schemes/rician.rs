//! Heterodyne detection of a coherent state followed by taking the phase.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::numerics::erfc;

/// Rician phase density `p_α(φ̂ | φ)`:
///
/// `e^{-α²}/2π + (α cos δ / 2√π) e^{-α² sin² δ} (1 + erf(α cos δ))`, `δ = φ̂ − φ`.
///
/// `1 + erf(x)` is evaluated as `erfc(−x)` so the lobe opposite the mean
/// keeps full relative precision.
pub fn rician_conditional(alpha: f64, phi_hat: f64, phi: f64) -> f64 {
    let a = alpha.abs();
    let delta = phi_hat - phi;
    let (s, c) = delta.sin_cos();
    let ac = a * c;
    (-a * a).exp() / TAU + 0.5 * ac / PI.sqrt() * (-(a * s) * (a * s)).exp() * erfc(-ac)
}

/// One phase estimate: `β = α e^{-iφ} + n` with `n ~ CN(0, 1)` (each
/// quadrature has variance ½), and `φ̂` defined by `β = |β| e^{-iφ̂}`.
pub fn sample_rician<R: Rng + ?Sized>(alpha: f64, phi: f64, rng: &mut R) -> f64 {
    let nr: f64 = rng.sample::<f64, _>(StandardNormal) * std::f64::consts::FRAC_1_SQRT_2;
    let ni: f64 = rng.sample::<f64, _>(StandardNormal) * std::f64::consts::FRAC_1_SQRT_2;
    let re = alpha * phi.cos() + nr;
    let im = -alpha * phi.sin() + ni;
    crate::circular::wrap_angle(-im.atan2(re))
}
