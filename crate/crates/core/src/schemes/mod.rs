//! Measurement schemes that turn a dephasing channel into samples of its
//! phase density.
//!
//! Each scheme sends a fixed probe through the channel and measures it; the
//! outcome is an angle `φ̂` with conditional law `p(φ̂ | φ)` given the random
//! rotation `φ`. Averaging over the channel's density gives the *induced*
//! density `∫ p(φ) p(φ̂|φ) dφ`, which approaches `p` as the probe energy
//! grows:
//!
//! * [`SchemeChannel::FejerSmoothed`]: a `d`-level uniform photon-number
//!   superposition measured in the Fourier basis, outcome `k` reported as
//!   `2πk/d` plus uniform noise over one bin;
//! * [`SchemeChannel::Rician`]: a coherent state `|α⟩` under heterodyne
//!   detection, reporting the phase of the outcome;
//! * [`SchemeChannel::LossyFejer`]: the first scheme with a pure-loss channel
//!   of transmissivity `η` in front.

mod fejer;
mod lossy;
mod rician;

use std::f64::consts::TAU;

use rand::Rng;

use crate::circular::{wrap_angle, CircularDensity};
use crate::error::{invalid, Result};
use crate::numerics::DEFAULT_PANELS;

pub use fejer::{active_outcome, fejer_pmf, outcome_angle, rectangle, rectangle_breakpoints, smoothed_conditional};
pub use lossy::{lossy_fejer_pmf, LossyFejer};
pub use rician::{rician_conditional, sample_rician};

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeChannel {
    FejerSmoothed { d: usize },
    Rician { alpha: f64 },
    LossyFejer(LossyFejer),
}

impl SchemeChannel {
    pub fn fejer(d: usize) -> Result<Self> {
        fejer::check_levels(d)?;
        Ok(SchemeChannel::FejerSmoothed { d })
    }

    pub fn rician(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return invalid(format!("coherent amplitude must be a nonnegative real, got {alpha}"));
        }
        Ok(SchemeChannel::Rician { alpha })
    }

    /// Coherent scheme with mean photon number `energy = α²`.
    pub fn rician_with_energy(energy: f64) -> Result<Self> {
        if !(energy >= 0.0) {
            return invalid(format!("mean photon number must be nonnegative, got {energy}"));
        }
        Self::rician(energy.sqrt())
    }

    pub fn lossy_fejer(d: usize, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return invalid(format!("transmissivity must lie in (0, 1], got {eta}"));
        }
        Ok(SchemeChannel::LossyFejer(LossyFejer::new(d, eta)?))
    }

    /// Mean photon number of the probe: `(d−1)/2` for the superposition,
    /// `α²` for the coherent state.
    pub fn mean_photon_number(&self) -> f64 {
        match self {
            SchemeChannel::FejerSmoothed { d } => (*d as f64 - 1.0) / 2.0,
            SchemeChannel::LossyFejer(l) => (l.levels() as f64 - 1.0) / 2.0,
            SchemeChannel::Rician { alpha } => alpha * alpha,
        }
    }

    /// Discrete outcome law, for the two Fourier-basis schemes.
    pub fn outcome_pmf(&self, phi: f64) -> Option<Result<Vec<f64>>> {
        match self {
            SchemeChannel::FejerSmoothed { d } => Some(fejer_pmf(*d, phi)),
            SchemeChannel::LossyFejer(l) => Some(l.pmf(phi)),
            SchemeChannel::Rician { .. } => None,
        }
    }

    /// `p(φ̂ | φ)`.
    pub fn conditional(&self, phi_hat: f64, phi: f64) -> Result<f64> {
        match self {
            SchemeChannel::FejerSmoothed { d } => smoothed_conditional(*d, phi_hat, phi),
            SchemeChannel::LossyFejer(l) => {
                let d = l.levels();
                let k = active_outcome(d, phi_hat);
                Ok(d as f64 / TAU * l.pmf(phi)?[k])
            }
            SchemeChannel::Rician { alpha } => Ok(rician_conditional(*alpha, phi_hat, phi)),
        }
    }

    /// The induced density `∫ base(φ) p(φ̂|φ) dφ`.
    ///
    /// The `φ` integral uses at least `panels` panels (and at least `d` for
    /// the Fourier schemes, whose outcome laws are trigonometric polynomials
    /// of degree `d−1`), aligned to the base density's breakpoints.
    pub fn induce(&self, base: &CircularDensity, panels: usize) -> Result<CircularDensity> {
        let induced = match self {
            SchemeChannel::FejerSmoothed { d } => InducedDensity::binned(*d, base, panels, |phi| fejer_pmf(*d, phi))?,
            SchemeChannel::LossyFejer(l) => InducedDensity::binned(l.levels(), base, panels, |phi| l.pmf(phi))?,
            SchemeChannel::Rician { alpha } => {
                let grid = CircularDensity::grid_for(&[base], panels)?;
                let weighted = grid.nodes().iter().zip(grid.weights()).map(|(&x, &w)| w * base.pdf(x)).collect();
                InducedDensity::Smooth { alpha: *alpha, nodes: grid.nodes().to_vec(), weighted_base: weighted }
            }
        };
        Ok(CircularDensity::induced(induced))
    }

    /// Draws `φ̂` given the channel rotation `phi`.
    pub fn sample_output<R: Rng + ?Sized>(&self, phi: f64, rng: &mut R) -> Result<f64> {
        match self {
            SchemeChannel::Rician { alpha } => Ok(sample_rician(*alpha, phi, rng)),
            SchemeChannel::FejerSmoothed { d } => Ok(sample_binned(*d, &fejer_pmf(*d, phi)?, rng)),
            SchemeChannel::LossyFejer(l) => Ok(sample_binned(l.levels(), &l.pmf(phi)?, rng)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SchemeChannel::FejerSmoothed { d } => format!("photon d={d}"),
            SchemeChannel::LossyFejer(l) => format!("lossy photon d={} eta={}", l.levels(), l.transmissivity()),
            SchemeChannel::Rician { alpha } => format!("coherent |alpha|^2={}", alpha * alpha),
        }
    }
}

/// Pick `k`, shift `2πk/d` into `[-π, π)`, add uniform noise over one bin.
fn sample_binned<R: Rng + ?Sized>(d: usize, pmf: &[f64], rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut k = d - 1;
    for (i, p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            k = i;
            break;
        }
    }
    let noise: f64 = rng.random::<f64>() * TAU / d as f64;
    wrap_angle(outcome_angle(d, k) + noise)
}

/// The output law of a scheme applied to a fixed channel density.
#[derive(Debug, Clone, PartialEq)]
pub enum InducedDensity {
    /// Piecewise constant: `d/2π · probs[k]` on the bin of outcome `k`.
    Binned { levels: usize, probs: Vec<f64> },
    /// Rician-smoothed: `Σᵢ weighted_base[i] · p_α(φ̂ | nodes[i])`.
    Smooth { alpha: f64, nodes: Vec<f64>, weighted_base: Vec<f64> },
}

impl InducedDensity {
    fn binned(d: usize, base: &CircularDensity, panels: usize, pmf: impl Fn(f64) -> Result<Vec<f64>>) -> Result<Self> {
        let grid = CircularDensity::grid_for(&[base], panels.max(d).max(DEFAULT_PANELS))?;
        let mut probs = vec![0.0; d];
        for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
            let wb = w * base.pdf(x);
            for (acc, p) in probs.iter_mut().zip(pmf(x)?) {
                *acc += wb * p;
            }
        }
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        Ok(InducedDensity::Binned { levels: d, probs })
    }

    pub fn pdf(&self, phi_hat: f64) -> f64 {
        match self {
            InducedDensity::Binned { levels, probs } => *levels as f64 / TAU * probs[active_outcome(*levels, phi_hat)],
            InducedDensity::Smooth { alpha, nodes, weighted_base } => {
                nodes.iter().zip(weighted_base).map(|(&phi, &wb)| wb * rician_conditional(*alpha, phi_hat, phi)).sum()
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            InducedDensity::Binned { levels, .. } => rectangle_breakpoints(*levels),
            InducedDensity::Smooth { .. } => Vec::new(),
        }
    }

    /// Outcome probabilities for the binned schemes.
    pub fn outcome_probabilities(&self) -> Option<&[f64]> {
        match self {
            InducedDensity::Binned { probs, .. } => Some(probs),
            InducedDensity::Smooth { .. } => None,
        }
    }
}

/// `p_{d}(φ̂) = ∫ base(φ) p_d(φ̂|φ) dφ` at a single point, by direct
/// quadrature over `φ`.
pub fn induced_density_photon(d: usize, base: &CircularDensity, phi_hat: f64) -> Result<f64> {
    fejer::check_levels(d)?;
    let grid = CircularDensity::grid_for(&[base], d.max(DEFAULT_PANELS))?;
    let k = active_outcome(d, phi_hat);
    let mut acc = 0.0;
    for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
        acc += w * base.pdf(x) * fejer::fejer_weight(d, TAU * k as f64 / d as f64 - x);
    }
    Ok(d as f64 / TAU * acc)
}

/// `p_α(φ̂) = ∫ base(φ) p_α(φ̂|φ) dφ` at a single point.
pub fn induced_density_coherent(alpha: f64, base: &CircularDensity, phi_hat: f64) -> Result<f64> {
    let grid = CircularDensity::grid_for(&[base], DEFAULT_PANELS)?;
    grid.integrate(|x| base.pdf(x) * rician_conditional(alpha, phi_hat, x))
}
