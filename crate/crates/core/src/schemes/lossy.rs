//! The photon-number-superposition measurement behind a pure-loss channel.

use std::f64::consts::TAU;

use super::fejer::check_levels;
use crate::error::{invalid, Error, Result};

/// Components more negative than this are a numerical failure; smaller
/// negatives are round-off and get clipped to zero.
const NEGATIVE_TOL: f64 = 1e-9;
const SUM_TOL: f64 = 1e-9;

/// Outcome law of the Fourier-basis measurement when the probe passes a
/// beamsplitter of transmissivity `η` before the phase rotation:
///
/// `p(k|φ) = d⁻² Σ_{m,n} cos((m−n)(2πk/d − φ)) Σ_ℓ η^{(m+n)/2−ℓ} (1−η)^ℓ √(C(m,ℓ) C(n,ℓ))`.
///
/// The inner double sum only depends on `m − n`, so it is folded into a
/// coherence vector `c[Δ]` once at construction; each outcome then costs
/// `O(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossyFejer {
    d: usize,
    eta: f64,
    coherence: Vec<f64>,
}

impl LossyFejer {
    pub fn new(d: usize, eta: f64) -> Result<Self> {
        check_levels(d)?;
        if !(0.0..=1.0).contains(&eta) {
            return invalid(format!("transmissivity must lie in [0, 1], got {eta}"));
        }
        let ln_fact: Vec<f64> = std::iter::once(0.0)
            .chain((1..d).scan(0.0, |acc, i| {
                *acc += (i as f64).ln();
                Some(*acc)
            }))
            .collect();
        let ln_binom = |n: usize, k: usize| ln_fact[n] - ln_fact[k] - ln_fact[n - k];
        // x^e with 0^0 = 1, in the log domain
        let ln_pow = |ln_base: f64, e: f64| if e == 0.0 { 0.0 } else { e * ln_base };
        let (ln_eta, ln_loss) = (eta.ln(), (1.0 - eta).ln());

        let mut coherence = vec![0.0; d];
        for m in 0..d {
            for n in m..d {
                let mut a = 0.0;
                for l in 0..=m {
                    let e = ln_pow(ln_eta, (m + n) as f64 / 2.0 - l as f64)
                        + ln_pow(ln_loss, l as f64)
                        + 0.5 * (ln_binom(m, l) + ln_binom(n, l));
                    a += e.exp();
                }
                coherence[n - m] += if n == m { a } else { 2.0 * a };
            }
        }
        Ok(LossyFejer { d, eta, coherence })
    }

    pub fn levels(&self) -> usize {
        self.d
    }

    pub fn transmissivity(&self) -> f64 {
        self.eta
    }

    /// Unclipped `p(k|φ)` straight from the cosine sum.
    pub(crate) fn raw(&self, k: usize, phi: f64) -> f64 {
        let x = TAU * k as f64 / self.d as f64 - phi;
        let s: f64 = self.coherence.iter().enumerate().map(|(delta, c)| c * (delta as f64 * x).cos()).sum();
        s / (self.d * self.d) as f64
    }

    /// The outcome distribution, with round-off negatives clipped.
    pub fn pmf(&self, phi: f64) -> Result<Vec<f64>> {
        let mut p: Vec<f64> = (0..self.d).map(|k| self.raw(k, phi)).collect();
        if let Some(&bad) = p.iter().find(|&&x| x < -NEGATIVE_TOL) {
            return Err(Error::NumericalFailure(format!("lossy Fejér component {bad} is negative")));
        }
        for x in &mut p {
            *x = x.max(0.0);
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SUM_TOL {
            return Err(Error::NumericalFailure(format!("lossy Fejér outcomes sum to {s}")));
        }
        for x in &mut p {
            *x /= s;
        }
        Ok(p)
    }
}

/// One-shot form of [`LossyFejer::pmf`].
pub fn lossy_fejer_pmf(d: usize, eta: f64, phi: f64) -> Result<Vec<f64>> {
    LossyFejer::new(d, eta)?.pmf(phi)
}
