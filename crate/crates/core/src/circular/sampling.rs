use std::f64::consts::{PI, TAU};

use super::CircularDensity;
use crate::numerics::gauss_legendre;

/// Number of equispaced cells in the cumulative table.
pub const CDF_CELLS: usize = 4096;

const CELL_ORDER: usize = 8;

/// Cumulative distribution tabulated on `CDF_CELLS` equal cells of
/// `[-π, π]`, inverted by bisection, linear interpolation and one Newton
/// step against the density itself.
#[derive(Debug, Clone)]
pub struct CdfTable {
    cum: Vec<f64>,
    total: f64,
    breaks: Vec<f64>,
    rule: (Vec<f64>, Vec<f64>),
}

impl CdfTable {
    pub(crate) fn build(density: &CircularDensity) -> Self {
        let mut breaks = density.breakpoints();
        breaks.sort_by(f64::total_cmp);
        let mut table =
            CdfTable { cum: Vec::with_capacity(CDF_CELLS + 1), total: 1.0, breaks, rule: gauss_legendre(CELL_ORDER) };
        let h = TAU / CDF_CELLS as f64;
        let mut acc = 0.0;
        table.cum.push(0.0);
        for i in 0..CDF_CELLS {
            let a = -PI + h * i as f64;
            acc += table.mass(density, a, a + h);
            table.cum.push(acc);
        }
        table.total = acc;
        for c in &mut table.cum {
            *c /= acc;
        }
        table
    }

    fn cell_width() -> f64 {
        TAU / CDF_CELLS as f64
    }

    /// Unnormalized `∫_a^b pdf`, split at density breakpoints inside `(a, b)`.
    fn mass(&self, density: &CircularDensity, a: f64, b: f64) -> f64 {
        let start = self.breaks.partition_point(|&x| x <= a);
        let mut lo = a;
        let mut sum = 0.0;
        for &x in self.breaks[start..].iter().take_while(|&&x| x < b) {
            sum += self.gauss(density, lo, x);
            lo = x;
        }
        sum + self.gauss(density, lo, b)
    }

    fn gauss(&self, density: &CircularDensity, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = a + half;
        let (x, w) = &self.rule;
        half * x.iter().zip(w).map(|(xi, wi)| wi * density.pdf(mid + half * xi)).sum::<f64>()
    }

    fn cell_of(phi: f64) -> usize {
        (((phi + PI) / Self::cell_width()).floor().max(0.0) as usize).min(CDF_CELLS - 1)
    }

    /// `P(Φ ≤ phi)` for `phi ∈ [-π, π]`.
    pub fn cdf(&self, density: &CircularDensity, phi: f64) -> f64 {
        let phi = phi.clamp(-PI, PI);
        let i = Self::cell_of(phi);
        let a = -PI + Self::cell_width() * i as f64;
        (self.cum[i] + self.mass(density, a, phi) / self.total).clamp(0.0, 1.0)
    }

    /// The angle in `[-π, π)` at which the CDF reaches `u ∈ [0, 1)`.
    pub fn invert(&self, density: &CircularDensity, u: f64) -> f64 {
        let h = Self::cell_width();
        // last index with cum[i] <= u, restricted to a real cell
        let i = (self.cum.partition_point(|&c| c <= u).max(1) - 1).min(CDF_CELLS - 1);
        let a = -PI + h * i as f64;
        let lo_c = self.cum[i];
        let span = self.cum[i + 1] - lo_c;
        let t = if span > 0.0 { ((u - lo_c) / span).clamp(0.0, 1.0) } else { 0.5 };
        let mut x = a + t * h;
        let f = density.pdf(x) / self.total;
        if f > 0.0 {
            let fx = lo_c + self.mass(density, a, x) / self.total;
            x -= (fx - u) / f;
        }
        let x = x.clamp(a, a + h);
        if x >= PI {
            -PI
        } else {
            x
        }
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }
}
