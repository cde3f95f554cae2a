//! Probability densities on the circle `[-π, π]`.
//!
//! Three parametric families are provided, each with a single spread
//! parameter (larger means closer to uniform):
//!
//! * wrapped normal, `p_γ(φ) = (2πγ)^{-1/2} Σ_k exp(-(φ + 2πk)² / 2γ)`,
//!   where `γ` is the variance of the unwrapped normal;
//! * von Mises, `p_λ(φ) = exp(cos φ / λ) / (2π I₀(1/λ))`;
//! * wrapped Cauchy, `p_κ(φ) = sinh √κ / (2π (cosh √κ − cos φ))`.
//!
//! Besides those, a [`CircularDensity`] can be uniform, a linearly
//! interpolated table, or the output law of a measurement scheme (see
//! [`crate::schemes`]). All of them are strictly positive.

mod sampling;
mod table;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{invalid, Result};
use crate::numerics::{log_bessel_i0, QuadratureGrid};
use crate::schemes::InducedDensity;
use crate::seed::RngSeed;

pub use sampling::CdfTable;
pub use table::TabulatedDensity;

const LN_TAU: f64 = 1.837_877_066_409_345_5;

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let w = x - TAU * ((x + PI) / TAU).floor();
    // rounding can land exactly on π
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// `x mod 2π` with the convention `min{x + 2πk : x + 2πk ≥ 0}`, in `[0, 2π)`.
pub fn mod_two_pi(x: f64) -> f64 {
    let m = x - TAU * (x / TAU).floor();
    if m >= TAU {
        m - TAU
    } else {
        m
    }
}

/// A draw from a circular density, normalized to `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PhaseSample(f64);

impl PhaseSample {
    pub fn new(angle: f64) -> Self {
        PhaseSample(wrap_angle(angle))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<PhaseSample> for f64 {
    fn from(s: PhaseSample) -> f64 {
        s.0
    }
}

/// One of the three parametric families, indexed by its spread parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    WrappedNormal,
    VonMises,
    WrappedCauchy,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::WrappedNormal, Family::VonMises, Family::WrappedCauchy];

    pub fn density(self, param: f64) -> Result<CircularDensity> {
        match self {
            Family::WrappedNormal => CircularDensity::wrapped_normal(param),
            Family::VonMises => CircularDensity::von_mises(param),
            Family::WrappedCauchy => CircularDensity::wrapped_cauchy(param),
        }
    }

    /// Short column tag: `wn`, `vm` or `wc`.
    pub fn tag(self) -> &'static str {
        match self {
            Family::WrappedNormal => "wn",
            Family::VonMises => "vm",
            Family::WrappedCauchy => "wc",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        match tag {
            "wn" | "wrapped-normal" => Some(Family::WrappedNormal),
            "vm" | "von-mises" => Some(Family::VonMises),
            "wc" | "wrapped-cauchy" => Some(Family::WrappedCauchy),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::WrappedNormal => "wrapped normal",
            Family::VonMises => "von Mises",
            Family::WrappedCauchy => "wrapped Cauchy",
        })
    }
}

#[derive(Debug, Clone)]
pub enum DensityKind {
    Uniform,
    WrappedNormal {
        variance: f64,
    },
    /// `vm_spread` is the λ in `exp(cos φ / λ)`, not a prior probability.
    VonMises {
        vm_spread: f64,
    },
    WrappedCauchy {
        kappa: f64,
    },
    Induced(Arc<InducedDensity>),
    Tabulated(Arc<TabulatedDensity>),
}

/// A strictly positive, normalized density on `[-π, π]`.
///
/// Cloning is cheap; clones share the lazily built sampling table.
#[derive(Debug, Clone)]
pub struct CircularDensity {
    kind: DensityKind,
    cdf: Arc<OnceLock<CdfTable>>,
}

impl CircularDensity {
    fn from_kind(kind: DensityKind) -> Self {
        CircularDensity { kind, cdf: Arc::new(OnceLock::new()) }
    }

    pub fn uniform() -> Self {
        Self::from_kind(DensityKind::Uniform)
    }

    pub fn wrapped_normal(variance: f64) -> Result<Self> {
        check_param("wrapped normal variance", variance)?;
        Ok(Self::from_kind(DensityKind::WrappedNormal { variance }))
    }

    pub fn von_mises(vm_spread: f64) -> Result<Self> {
        check_param("von Mises spread", vm_spread)?;
        Ok(Self::from_kind(DensityKind::VonMises { vm_spread }))
    }

    pub fn wrapped_cauchy(kappa: f64) -> Result<Self> {
        check_param("wrapped Cauchy parameter", kappa)?;
        Ok(Self::from_kind(DensityKind::WrappedCauchy { kappa }))
    }

    pub fn induced(induced: InducedDensity) -> Self {
        Self::from_kind(DensityKind::Induced(Arc::new(induced)))
    }

    pub fn tabulated(table: TabulatedDensity) -> Self {
        Self::from_kind(DensityKind::Tabulated(Arc::new(table)))
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    /// The density at `phi`; any real angle is accepted and wrapped.
    pub fn pdf(&self, phi: f64) -> f64 {
        match &self.kind {
            DensityKind::Uniform => 1.0 / TAU,
            DensityKind::WrappedNormal { variance } => wrapped_normal_pdf(*variance, wrap_angle(phi)),
            DensityKind::VonMises { .. } => self.log_pdf(phi).exp(),
            DensityKind::WrappedCauchy { kappa } => wrapped_cauchy_pdf(*kappa, phi),
            DensityKind::Induced(d) => d.pdf(phi),
            DensityKind::Tabulated(t) => t.pdf(phi),
        }
    }

    /// `ln pdf(phi)`, computed in the log domain where the density can
    /// underflow (wrapped normal tails, strongly concentrated von Mises).
    pub fn log_pdf(&self, phi: f64) -> f64 {
        match &self.kind {
            DensityKind::Uniform => -LN_TAU,
            DensityKind::WrappedNormal { variance } => wrapped_normal_log_pdf(*variance, wrap_angle(phi)),
            DensityKind::VonMises { vm_spread } => {
                let conc = 1.0 / vm_spread;
                phi.cos() * conc - LN_TAU - log_bessel_i0(conc)
            }
            _ => self.pdf(phi).ln(),
        }
    }

    /// Angles where the density has a jump or a kink. Quadrature grids for
    /// integrands involving this density should be aligned to them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            DensityKind::Induced(d) => d.breakpoints(),
            DensityKind::Tabulated(t) => t.angles().to_vec(),
            _ => Vec::new(),
        }
    }

    /// The default-resolution grid aligned to the breakpoints of `densities`.
    pub fn grid_for(densities: &[&CircularDensity], panels: usize) -> Result<QuadratureGrid> {
        let breaks: Vec<f64> = densities.iter().flat_map(|d| d.breakpoints()).collect();
        if breaks.is_empty() {
            QuadratureGrid::new(panels)
        } else {
            QuadratureGrid::aligned(&breaks, panels)
        }
    }

    /// The cumulative table used for sampling, built on first use.
    pub fn cdf_table(&self) -> &CdfTable {
        self.cdf.get_or_init(|| CdfTable::build(self))
    }

    pub fn cdf(&self, phi: f64) -> f64 {
        self.cdf_table().cdf(self, phi)
    }

    /// `n` inverse-CDF draws using stream 0 of `seed`.
    pub fn sample(&self, seed: RngSeed, n: usize) -> Vec<PhaseSample> {
        let mut rng = seed.rng(0);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<PhaseSample> {
        (0..n).map(|_| PhaseSample::new(self.draw(rng))).collect()
    }

    /// One draw, as a raw angle in `[-π, π)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.cdf_table().invert(self, u)
    }

    /// Kolmogorov–Smirnov distance between the empirical law of `samples`
    /// and this density, with the CDF anchored at `-π`.
    pub fn ks_statistic(&self, samples: &[PhaseSample]) -> f64 {
        let mut xs: Vec<f64> = samples.iter().map(|s| s.value()).collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = self.cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Tabulates the density at `n` equispaced angles starting at `-π`.
    pub fn tabulate(&self, n: usize) -> Result<TabulatedDensity> {
        if n < 3 {
            return invalid("a table needs at least 3 points");
        }
        let h = TAU / n as f64;
        let angles: Vec<f64> = (0..n).map(|i| -PI + h * i as f64).collect();
        let values = angles.iter().map(|&a| self.pdf(a)).collect();
        TabulatedDensity::new(angles, values)
    }
}

fn check_param(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        invalid(format!("{what} must be positive and finite, got {v}"))
    }
}

/// Image count for the wrapped-normal sum: every omitted image lies more
/// than 9 standard deviations from `phi`.
fn wrapped_normal_images(variance: f64, phi: f64) -> i64 {
    let k = ((9.0 * variance.sqrt() + phi.abs()) / TAU).ceil() as i64;
    k.max(3)
}

pub(crate) fn wrapped_normal_pdf(variance: f64, phi: f64) -> f64 {
    let k = wrapped_normal_images(variance, phi);
    let inv = 0.5 / variance;
    let sum: f64 = (-k..=k)
        .map(|j| {
            let x = phi + TAU * j as f64;
            (-x * x * inv).exp()
        })
        .sum();
    sum / (TAU * variance).sqrt()
}

pub(crate) fn wrapped_normal_log_pdf(variance: f64, phi: f64) -> f64 {
    let k = wrapped_normal_images(variance, phi);
    let inv = 0.5 / variance;
    let expo = |j: i64| {
        let x = phi + TAU * j as f64;
        -x * x * inv
    };
    let max = (-k..=k).map(expo).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = (-k..=k).map(|j| (expo(j) - max).exp()).sum();
    max + sum.ln() - 0.5 * (TAU * variance).ln()
}

pub(crate) fn wrapped_cauchy_pdf(kappa: f64, phi: f64) -> f64 {
    let a = kappa.sqrt();
    if a < 20.0 {
        // cosh a − cos φ = 2 sinh²(a/2) + 2 sin²(φ/2), free of cancellation
        let sh = (0.5 * a).sinh();
        let s = (0.5 * phi).sin();
        a.sinh() / (TAU * 2.0 * (sh * sh + s * s))
    } else {
        let e = (-a).exp();
        (1.0 - e * e) / (TAU * (1.0 + e * e - 2.0 * e * phi.cos()))
    }
}

/// `∫ |a − b|` on `grid`; both densities should be normalized, so the
/// result lies in `[0, 2]`.
pub fn l1_distance(a: &CircularDensity, b: &CircularDensity, grid: &QuadratureGrid) -> Result<f64> {
    grid.integrate(|x| (a.pdf(x) - b.pdf(x)).abs())
}
