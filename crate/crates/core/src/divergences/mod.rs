//! Information quantities between circular densities, all in nats.
//!
//! | quantity | definition |
//! |---|---|
//! | relative entropy `D(p‖q)` | `∫ p ln(p/q)` |
//! | variance `V(p‖q)` | `∫ p (ln(p/q) − D)²` |
//! | Rényi `D_α(p‖q)` | `(α−1)⁻¹ ln ∫ p^α q^{1−α}` |
//! | Chernoff `C(p‖q)` | `−ln min_{s∈[0,1]} ∫ p^s q^{1−s}` |
//! | multivariate Chernoff | `−ln min_{s ∈ simplex} ∫ Π pᵢ^{sᵢ}` |
//!
//! These are the asymptotic rates of symmetric, asymmetric, strong-converse
//! and Hoeffding-type hypothesis tests on i.i.d. samples, and, through the
//! measurement schemes in [`crate::schemes`], of the corresponding channel
//! discrimination problems. Every report carries a quadrature error
//! estimate from re-evaluating on the coarsened grid.

mod exponents;
mod fisher;

use crate::circular::CircularDensity;
use crate::error::{invalid, Error, Result};
use crate::numerics::{log_integral_exp, minimize_unimodal, phi_inv, QuadratureGrid};

pub use exponents::{hoeffding_exponent, strong_converse_exponent};
pub use fisher::{default_step as fisher_default_step, fisher_information, fisher_information_with_step};

/// Tolerance of the scalar searches over `s` and `α`.
pub const OPTIMIZER_TOL: f64 = 1e-10;

/// Where an optimized divergence attains its extremum.
#[derive(Debug, Clone, PartialEq)]
pub enum Optimizer {
    /// `s*` for Chernoff, `α*` for the exponents.
    Scalar(f64),
    Simplex(Vec<f64>),
    /// Minimizing pair of a pairwise minimum, with that pair's `s*`.
    Pair {
        i: usize,
        j: usize,
        s: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub value: f64,
    pub optimizer: Option<Optimizer>,
    pub quad_error: f64,
}

impl DivergenceReport {
    fn plain(value: f64, quad_error: f64) -> Self {
        DivergenceReport { value, optimizer: None, quad_error }
    }

    /// The scalar optimizer (`s*` or `α*`), if any.
    pub fn argmin(&self) -> Option<f64> {
        match &self.optimizer {
            Some(Optimizer::Scalar(s)) => Some(*s),
            Some(Optimizer::Pair { s, .. }) => Some(*s),
            _ => None,
        }
    }
}

/// `ln p` and `ln q` at every node of one grid, evaluated once so the
/// optimizers can sweep `s` or `α` without touching the densities again.
pub(crate) struct NodeLogs {
    ln_w: Vec<f64>,
    lp: Vec<f64>,
    lq: Vec<f64>,
}

impl NodeLogs {
    pub(crate) fn new(p: &CircularDensity, q: &CircularDensity, grid: &QuadratureGrid) -> Result<Self> {
        let nodes = grid.nodes();
        let lp: Vec<f64> = nodes.iter().map(|&x| p.log_pdf(x)).collect();
        let lq: Vec<f64> = nodes.iter().map(|&x| q.log_pdf(x)).collect();
        for (i, &x) in nodes.iter().enumerate() {
            for v in [lp[i], lq[i]] {
                if v.is_nan() || v == f64::INFINITY {
                    return Err(Error::NonFinite { node: x, value: v });
                }
            }
        }
        Ok(NodeLogs { ln_w: grid.weights().iter().map(|w| w.ln()).collect(), lp, lq })
    }

    /// `ln ∫ p^s q^{1−s}`, convex in `s`.
    pub(crate) fn log_affinity(&self, s: f64) -> f64 {
        let t = |i: usize| {
            // 0·(−∞) is 0 here: the factor is absent
            let a = if s == 0.0 { 0.0 } else { s * self.lp[i] };
            let b = if s == 1.0 { 0.0 } else { (1.0 - s) * self.lq[i] };
            self.ln_w[i] + a + b
        };
        let max = (0..self.lp.len()).map(t).fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return max;
        }
        max + (0..self.lp.len()).map(|i| (t(i) - max).exp()).sum::<f64>().ln()
    }

    /// `(D, V)`: mean and variance of `ln(p/q)` under `p`.
    fn moments(&self, nodes: &[f64]) -> Result<(f64, f64)> {
        let n = self.lp.len();
        let llr = |i: usize| -> Result<f64> {
            let v = self.lp[i] - self.lq[i];
            if v.is_finite() {
                Ok(v)
            } else if self.lp[i] == f64::NEG_INFINITY {
                Ok(0.0)
            } else {
                Err(Error::NonFinite { node: nodes[i], value: v })
            }
        };
        let mut d = 0.0;
        for i in 0..n {
            d += (self.ln_w[i] + self.lp[i]).exp() * llr(i)?;
        }
        let mut v = 0.0;
        for i in 0..n {
            let c = llr(i)? - d;
            v += (self.ln_w[i] + self.lp[i]).exp() * c * c;
        }
        Ok((d, v))
    }
}

fn log_ratio_moments(p: &CircularDensity, q: &CircularDensity, grid: &QuadratureGrid) -> Result<(f64, f64)> {
    NodeLogs::new(p, q, grid)?.moments(grid.nodes())
}

/// `D(p‖q) = ∫ p ln(p/q)`.
pub fn relative_entropy(p: &CircularDensity, q: &CircularDensity, grid: &QuadratureGrid) -> Result<DivergenceReport> {
    let (d, _) = log_ratio_moments(p, q, grid)?;
    let (dc, _) = log_ratio_moments(p, q, &grid.coarsened())?;
    Ok(DivergenceReport::plain(d, (d - dc).abs()))
}

/// `V(p‖q) = ∫ p (ln(p/q) − D(p‖q))²`.
pub fn relative_entropy_variance(
    p: &CircularDensity,
    q: &CircularDensity,
    grid: &QuadratureGrid,
) -> Result<DivergenceReport> {
    let (_, v) = log_ratio_moments(p, q, grid)?;
    let (_, vc) = log_ratio_moments(p, q, &grid.coarsened())?;
    Ok(DivergenceReport::plain(v, (v - vc).abs()))
}

/// `ln ∫ p^s q^{1−s}`, convex in `s`.
pub(crate) fn log_affinity(p: &CircularDensity, q: &CircularDensity, s: f64, grid: &QuadratureGrid) -> Result<f64> {
    Ok(NodeLogs::new(p, q, grid)?.log_affinity(s))
}

/// Rényi relative entropy of order `alpha ∉ {1}`.
pub fn renyi(p: &CircularDensity, q: &CircularDensity, alpha: f64, grid: &QuadratureGrid) -> Result<DivergenceReport> {
    if !(alpha > 0.0 && alpha.is_finite()) || alpha == 1.0 {
        return invalid(format!(
            "Rényi order must lie in (0, 1) ∪ (1, ∞), got {alpha}; use relative_entropy for order 1"
        ));
    }
    let v = log_affinity(p, q, alpha, grid)? / (alpha - 1.0);
    let vc = log_affinity(p, q, alpha, &grid.coarsened())? / (alpha - 1.0);
    Ok(DivergenceReport::plain(v, (v - vc).abs()))
}

/// Chernoff divergence, with the minimizing `s*` as optimizer.
pub fn chernoff(p: &CircularDensity, q: &CircularDensity, grid: &QuadratureGrid) -> Result<DivergenceReport> {
    let logs = NodeLogs::new(p, q, grid)?;
    let m = minimize_unimodal(|s| logs.log_affinity(s), 0.0, 1.0, OPTIMIZER_TOL)?;
    let coarse = log_affinity(p, q, m.argmin, &grid.coarsened())?;
    Ok(DivergenceReport {
        value: (-m.min).max(0.0),
        optimizer: Some(Optimizer::Scalar(m.argmin)),
        quad_error: (m.min - coarse).abs(),
    })
}

/// Exponentiated-gradient settings for [`multivariate_chernoff`].
const EG_ITERATIONS: usize = 500;
const EG_STEP: f64 = 0.5;
const EG_TOL: f64 = 1e-9;

/// `−ln min_s ∫ Π pᵢ^{sᵢ}` over probability vectors `s`.
///
/// Two densities go through [`chernoff`]. Otherwise exponentiated-gradient
/// descent on the simplex, started at the uniform vector: the gradient of
/// `ln ∫ Π pᵢ^{sᵢ}` in `sᵢ` is the mean of `ln pᵢ` under the tilted density.
pub fn multivariate_chernoff(densities: &[CircularDensity], grid: &QuadratureGrid) -> Result<DivergenceReport> {
    let l = densities.len();
    if l < 2 {
        return invalid(format!("need at least two densities, got {l}"));
    }
    if l == 2 {
        let r = chernoff(&densities[0], &densities[1], grid)?;
        let s = r.argmin().unwrap_or(0.5);
        return Ok(DivergenceReport { optimizer: Some(Optimizer::Simplex(vec![s, 1.0 - s])), ..r });
    }
    let logs: Vec<Vec<f64>> = densities.iter().map(|d| grid.nodes().iter().map(|&x| d.log_pdf(x)).collect()).collect();
    let ln_w: Vec<f64> = grid.weights().iter().map(|w| w.ln()).collect();
    let objective = |s: &[f64], tilted: &mut Vec<f64>| -> f64 {
        tilted.clear();
        tilted.extend((0..ln_w.len()).map(|n| ln_w[n] + (0..l).map(|i| s[i] * logs[i][n]).sum::<f64>()));
        let max = tilted.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for t in tilted.iter_mut() {
            *t = (*t - max).exp();
            total += *t;
        }
        for t in tilted.iter_mut() {
            *t /= total;
        }
        max + total.ln()
    };

    let mut s = vec![1.0 / l as f64; l];
    let mut tilted = Vec::with_capacity(ln_w.len());
    let mut value = objective(&s, &mut tilted);
    let mut step = EG_STEP;
    for _ in 0..EG_ITERATIONS {
        let grad: Vec<f64> = logs.iter().map(|li| li.iter().zip(&tilted).map(|(a, t)| a * t).sum()).collect();
        let shift = grad.iter().copied().fold(f64::INFINITY, f64::min);
        let mut next: Vec<f64> = s.iter().zip(&grad).map(|(si, g)| si * (-step * (g - shift)).exp()).collect();
        let z: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= z);
        let moved = next.iter().zip(&s).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if moved < EG_TOL {
            break;
        }
        let mut trial = Vec::with_capacity(ln_w.len());
        let next_value = objective(&next, &mut trial);
        if next_value <= value {
            s = next;
            tilted = trial;
            let gain = value - next_value;
            value = next_value;
            if gain < EG_TOL * EG_TOL {
                break;
            }
        } else {
            // overshoot on a convex objective: shorten the step
            step *= 0.5;
        }
    }
    // multiplicative updates only approach a face asymptotically; optima on
    // an edge are settled exactly by the binary search on that edge
    for i in 0..l {
        for j in i + 1..l {
            let edge = chernoff(&densities[i], &densities[j], grid)?;
            if -edge.value < value {
                value = -edge.value;
                let t = edge.argmin().unwrap_or(0.5);
                s = vec![0.0; l];
                (s[i], s[j]) = (t, 1.0 - t);
            }
        }
    }
    let coarse = grid.coarsened();
    let coarse_value = log_integral_exp(|x| densities.iter().zip(&s).map(|(d, si)| si * d.log_pdf(x)).sum(), &coarse)?;
    Ok(DivergenceReport {
        value: (-value).max(0.0),
        optimizer: Some(Optimizer::Simplex(s)),
        quad_error: (value - coarse_value).abs(),
    })
}

/// `min_{i≠j} C(pᵢ‖pⱼ)`; the optimizer names the minimizing pair.
pub fn min_pairwise_chernoff(densities: &[CircularDensity], grid: &QuadratureGrid) -> Result<DivergenceReport> {
    let l = densities.len();
    if l < 2 {
        return invalid(format!("need at least two densities, got {l}"));
    }
    let mut best: Option<DivergenceReport> = None;
    for i in 0..l {
        for j in i + 1..l {
            let r = chernoff(&densities[i], &densities[j], grid)?;
            if best.as_ref().is_none_or(|b| r.value < b.value) {
                let s = r.argmin().unwrap_or(0.5);
                best = Some(DivergenceReport { optimizer: Some(Optimizer::Pair { i, j, s }), ..r });
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

/// `½(1 − ∫ |λp − (1−λ)q|)`: the minimum one-shot error of deciding between
/// `p` (prior `prior`) and `q`.
pub fn bayes_error_exact_n1(
    p: &CircularDensity,
    q: &CircularDensity,
    prior: f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    if !(prior > 0.0 && prior < 1.0) {
        return invalid(format!("prior must lie in (0, 1), got {prior}"));
    }
    let l1 = grid.integrate(|x| (prior * p.pdf(x) - (1.0 - prior) * q.pdf(x)).abs())?;
    Ok(0.5 * (1.0 - l1))
}

/// Normal approximation to the optimal type-II exponent at level `eps`:
/// `D + √(V/n) Φ⁻¹(ε) + ln n / 2n`. The `O(1/n)` remainder is dropped.
pub fn strassen_expansion(relent: f64, variance: f64, n: usize, eps: f64) -> Result<f64> {
    if n == 0 {
        return invalid("sample count must be at least 1");
    }
    let n = n as f64;
    Ok(relent + (variance / n).sqrt() * phi_inv(eps)? + n.ln() / (2.0 * n))
}

/// [`strassen_expansion`] with `D` and `V` computed on `grid`.
pub fn stein_second_order(
    p: &CircularDensity,
    q: &CircularDensity,
    n: usize,
    eps: f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    let (d, v) = log_ratio_moments(p, q, grid)?;
    strassen_expansion(d, v, n, eps)
}
