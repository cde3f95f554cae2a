//! Fisher information of the parametric families in their spread parameter.

use crate::circular::Family;
use crate::error::{invalid, Result};
use crate::numerics::QuadratureGrid;

/// The default central-difference step, `10⁻³·max(θ, 1)`.
pub fn default_step(theta: f64) -> f64 {
    1e-3 * theta.max(1.0)
}

/// `F(θ) = ∫ p_θ (∂_θ ln p_θ)²` with the default step.
pub fn fisher_information(family: Family, theta: f64, grid: &QuadratureGrid) -> Result<f64> {
    fisher_information_with_step(family, theta, default_step(theta), grid)
}

/// `∫ p_θ(φ) [(ln p_{θ+δ}(φ) − ln p_{θ−δ}(φ)) / 2δ]² dφ`.
///
/// Central differences of `log_pdf` rather than per-family derivatives; the
/// truncation error is `O(δ²)` relative.
pub fn fisher_information_with_step(family: Family, theta: f64, delta: f64, grid: &QuadratureGrid) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("difference step must be positive, got {delta}"));
    }
    if !(theta - delta > 0.0 && theta.is_finite()) {
        return invalid(format!("θ ± δ must stay positive, got θ = {theta}, δ = {delta}"));
    }
    let p = family.density(theta)?;
    let lo = family.density(theta - delta)?;
    let hi = family.density(theta + delta)?;
    grid.integrate(|x| {
        let score = (hi.log_pdf(x) - lo.log_pdf(x)) / (2.0 * delta);
        p.pdf(x) * score * score
    })
}
