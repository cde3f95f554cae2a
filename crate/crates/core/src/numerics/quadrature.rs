//! Composite Gauss–Legendre quadrature over one period `[-π, π]`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

/// Points per panel on a standard grid.
pub const DEFAULT_ORDER: usize = 16;
/// Panels on a standard grid.
pub const DEFAULT_PANELS: usize = 64;

/// Breakpoints closer than this are merged when building an aligned grid.
const BREAK_MERGE_TOL: f64 = 1e-12;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R8: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match order {
        16 => R16.get_or_init(|| gauss_legendre(16)),
        8 => R8.get_or_init(|| gauss_legendre(8)),
        _ => unreachable!("only 8- and 16-point rules are used"),
    }
}

/// Fixed nodes and weights for integrating over `[-π, π]`.
///
/// The interval is split into segments at a set of breakpoints (just `±π`
/// for a plain grid), each segment into equal panels, and each panel carries
/// a Gauss–Legendre rule. Integrands with kinks or jumps stay accurate as
/// long as every discontinuity is a breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    breaks: Vec<f64>,
    subdivisions: Vec<usize>,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        Self::new(DEFAULT_PANELS).expect("default panel count is positive")
    }
}

impl QuadratureGrid {
    /// `panels` equal panels of 16-point Gauss–Legendre.
    pub fn new(panels: usize) -> Result<Self> {
        if panels == 0 {
            return invalid("quadrature grid needs at least one panel");
        }
        Ok(Self::build(vec![-PI, PI], vec![panels], DEFAULT_ORDER))
    }

    /// A grid whose panel boundaries include every angle in `breakpoints`
    /// (wrapped into `[-π, π)`), with roughly `panels` panels in total.
    pub fn aligned(breakpoints: &[f64], panels: usize) -> Result<Self> {
        if panels == 0 {
            return invalid("quadrature grid needs at least one panel");
        }
        let mut breaks: Vec<f64> =
            breakpoints.iter().map(|&b| crate::circular::wrap_angle(b)).chain([-PI, PI]).collect();
        if breaks.iter().any(|b| !b.is_finite()) {
            return invalid("non-finite breakpoint");
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < BREAK_MERGE_TOL);
        // dedup may have eaten the closing π into a breakpoint just below it
        *breaks.last_mut().expect("non-empty") = PI;
        if breaks.len() < 2 {
            breaks = vec![-PI, PI];
        }
        let subdivisions =
            breaks.windows(2).map(|w| ((panels as f64 * (w[1] - w[0]) / TAU).ceil() as usize).max(1)).collect();
        Ok(Self::build(breaks, subdivisions, DEFAULT_ORDER))
    }

    fn build(breaks: Vec<f64>, subdivisions: Vec<usize>, order: usize) -> Self {
        let (x, w) = rule(order);
        let total: usize = subdivisions.iter().sum();
        let mut nodes = Vec::with_capacity(total * order);
        let mut weights = Vec::with_capacity(total * order);
        for (seg, &sub) in breaks.windows(2).zip(&subdivisions) {
            let h = (seg[1] - seg[0]) / sub as f64;
            for j in 0..sub {
                let a = seg[0] + h * j as f64;
                let half = 0.5 * h;
                let mid = a + half;
                for (xi, wi) in x.iter().zip(w) {
                    nodes.push(mid + half * xi);
                    weights.push(half * wi);
                }
            }
        }
        Self { breaks, subdivisions, order, nodes, weights }
    }

    pub fn panels(&self) -> usize {
        self.subdivisions.iter().sum()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    /// The companion grid used for error estimates: half the panels in every
    /// segment, or the 8-point rule when every segment is already one panel.
    pub fn coarsened(&self) -> Self {
        let halved: Vec<usize> = self.subdivisions.iter().map(|s| s.div_ceil(2)).collect();
        if halved != self.subdivisions {
            Self::build(self.breaks.clone(), halved, self.order)
        } else {
            Self::build(self.breaks.clone(), self.subdivisions.clone(), 8)
        }
    }

    /// Twice the panels in every segment.
    pub fn refined(&self) -> Self {
        let doubled = self.subdivisions.iter().map(|s| s * 2).collect();
        Self::build(self.breaks.clone(), doubled, self.order)
    }

    /// `Σ wᵢ f(xᵢ)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        integrate_periodic(f, self)
    }

    /// Integral with `|result(grid) − result(coarsened grid)|` as error.
    pub fn integrate_with_error(&self, f: impl Fn(f64) -> f64) -> Result<Estimate> {
        let value = integrate_periodic(&f, self)?;
        let coarse = integrate_periodic(&f, &self.coarsened())?;
        Ok(Estimate { value, error: (value - coarse).abs() })
    }
}

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `Σ wᵢ f(nodeᵢ)` over the grid. Fails on the first non-finite value.
pub fn integrate_periodic(f: impl Fn(f64) -> f64, grid: &QuadratureGrid) -> Result<f64> {
    let mut sum = 0.0;
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: x, value: v });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// `ln Σ wᵢ exp(g(nodeᵢ))`, evaluated without overflow.
///
/// `g` may return `-∞` (a vanishing integrand) but not NaN or `+∞`.
pub fn log_integral_exp(g: impl Fn(f64) -> f64, grid: &QuadratureGrid) -> Result<f64> {
    let mut terms = Vec::with_capacity(grid.nodes.len());
    let mut max = f64::NEG_INFINITY;
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        let v = g(x);
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::NonFinite { node: x, value: v });
        }
        let t = v + w.ln();
        max = max.max(t);
        terms.push(t);
    }
    if max == f64::NEG_INFINITY {
        return Ok(max);
    }
    let s: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    Ok(max + s.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        for deg in 0..32 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn weights_sum_to_period_and_nodes_increase() {
        for grid in [
            QuadratureGrid::default(),
            QuadratureGrid::new(3).unwrap(),
            QuadratureGrid::aligned(&[0.1, 2.0, -3.0, 3.5], 40).unwrap(),
        ] {
            let s: f64 = grid.weights().iter().sum();
            assert!((s - TAU).abs() < 1e-12);
            assert!(grid.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(grid.nodes().iter().all(|x| (-PI..=PI).contains(x)));
            assert!(grid.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn constant_and_cosine() {
        let grid = QuadratureGrid::new(8).unwrap();
        let one = integrate_periodic(|_| 1.0 / TAU, &grid).unwrap();
        assert!((one - 1.0).abs() < 1e-12);
        let c = integrate_periodic(f64::cos, &grid).unwrap();
        assert!(c.abs() < 1e-10);
    }

    #[test]
    fn non_finite_value_names_the_node() {
        let grid = QuadratureGrid::new(2).unwrap();
        let err = integrate_periodic(|x| if x > 0.0 { f64::NAN } else { 1.0 }, &grid).unwrap_err();
        match err {
            Error::NonFinite { node, .. } => assert!(node > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_panels_rejected() {
        assert!(QuadratureGrid::new(0).is_err());
        assert!(QuadratureGrid::aligned(&[], 0).is_err());
    }

    #[test]
    fn aligned_grid_integrates_step_exactly() {
        let step = |x: f64| if (0.3..1.7).contains(&x) { 2.0 } else { 0.5 };
        let want = 2.0 * 1.4 + 0.5 * (TAU - 1.4);
        let grid = QuadratureGrid::aligned(&[0.3, 1.7], 8).unwrap();
        assert!((grid.integrate(step).unwrap() - want).abs() < 1e-13);
        // the same breakpoint listed twice, or at ±π, must not create empty segments
        let grid = QuadratureGrid::aligned(&[0.3, 0.3, 1.7, PI, -PI], 8).unwrap();
        assert!((grid.integrate(step).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn coarsening_keeps_breakpoints() {
        let grid = QuadratureGrid::aligned(&[0.5], 1).unwrap();
        let coarse = grid.coarsened();
        assert_eq!(coarse.breakpoints(), grid.breakpoints());
        assert_eq!(coarse.nodes().len(), grid.panels() * 8);
        assert_eq!(QuadratureGrid::default().coarsened().panels(), 32);
        assert_eq!(QuadratureGrid::default().refined().panels(), 128);
    }

    #[test]
    fn log_integral_matches_direct_sum() {
        let grid = QuadratureGrid::default();
        let direct = grid.integrate(|x| (2.0 * x.cos()).exp()).unwrap();
        let logged = log_integral_exp(|x| 2.0 * x.cos(), &grid).unwrap();
        assert!((logged - direct.ln()).abs() < 1e-13);
        // values that would overflow exp() directly
        let big = log_integral_exp(|x| 1000.0 + x.cos(), &grid).unwrap();
        let small = log_integral_exp(|x| x.cos(), &grid).unwrap();
        assert!((big - 1000.0 - small).abs() < 1e-10);
    }
}
