//! Rate-constrained exponents built from the Rényi family.

use super::{DivergenceReport, NodeLogs, Optimizer, OPTIMIZER_TOL};
use crate::circular::CircularDensity;
use crate::error::{invalid, Result};
use crate::numerics::{minimize_unimodal, QuadratureGrid};

/// Largest `u = 1 − 1/α` searched by the strong-converse optimizer.
const U_MAX: f64 = 1.0 - 1e-6;
/// Smallest order searched by the Hoeffding optimizer.
const ALPHA_MIN: f64 = 1e-6;

fn check_rate(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return invalid(format!("rate must be positive and finite, got {r}"));
    }
    Ok(())
}

/// `(α−1)/α · (r − D_α)` written through `ln ∫ p^α q^{1−α} = (α−1) D_α`.
fn tilted_rate(logs: &NodeLogs, alpha: f64, r: f64) -> f64 {
    ((alpha - 1.0) * r - logs.log_affinity(alpha)) / alpha
}

/// Golden search on `−objective`; returns `(argmax, max)`.
fn maximize(objective: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let m = minimize_unimodal(|x| -objective(x), lo, hi, OPTIMIZER_TOL)?;
    Ok((m.argmin, -m.min))
}

/// `sup_{α>1} (α−1)/α · (r − D_α(p‖q))`: the rate at which the type-I
/// success probability vanishes when the type-II error decays faster than
/// `e^{−nr}`.
///
/// Searched over `u = 1 − 1/α ∈ [0, 1 − 10⁻⁶]`, where the objective
/// `u r − (1−u)·ln ∫ p^α q^{1−α}` is concave. The optimizer is `α*`
/// (`α* = 1` means the supremum sits at the boundary and the value is 0).
pub fn strong_converse_exponent(
    p: &CircularDensity,
    q: &CircularDensity,
    r: f64,
    grid: &QuadratureGrid,
) -> Result<DivergenceReport> {
    check_rate(r)?;
    let at = |logs: &NodeLogs, u: f64| if u == 0.0 { 0.0 } else { tilted_rate(logs, 1.0 / (1.0 - u), r) };
    let logs = NodeLogs::new(p, q, grid)?;
    let (u, value) = maximize(|u| at(&logs, u), 0.0, U_MAX)?;
    let coarse = at(&NodeLogs::new(p, q, &grid.coarsened())?, u);
    Ok(DivergenceReport {
        value: value.max(0.0),
        optimizer: Some(Optimizer::Scalar(1.0 / (1.0 - u))),
        quad_error: (value - coarse).abs(),
    })
}

/// `sup_{α∈(0,1)} (α−1)/α · (r − D_α(p‖q))`: the best type-I error exponent
/// when the type-II error must decay at least as `e^{−nr}`. Zero for
/// `r ≥ D(p‖q)`.
///
/// The objective is unimodal in `α` on `[10⁻⁶, 1]` and vanishes at `α = 1`.
pub fn hoeffding_exponent(
    p: &CircularDensity,
    q: &CircularDensity,
    r: f64,
    grid: &QuadratureGrid,
) -> Result<DivergenceReport> {
    check_rate(r)?;
    let at = |logs: &NodeLogs, a: f64| if a == 1.0 { 0.0 } else { tilted_rate(logs, a, r) };
    let logs = NodeLogs::new(p, q, grid)?;
    let (alpha, value) = maximize(|a| at(&logs, a), ALPHA_MIN, 1.0)?;
    let coarse = at(&NodeLogs::new(p, q, &grid.coarsened())?, alpha);
    Ok(DivergenceReport {
        value: value.max(0.0),
        optimizer: Some(Optimizer::Scalar(alpha)),
        quad_error: (value - coarse).abs(),
    })
}
