use crate::error::{invalid, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub min: f64,
}

/// Golden-section search for the minimum of a unimodal `g` on `[lo, hi]`.
///
/// The bracket is shrunk until its half-width is below `tol`, so the returned
/// argmin is within `tol` of the true one. The endpoints are checked last,
/// which makes boundary minima exact.
pub fn minimize_unimodal(mut g: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<Minimum> {
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {tol}"));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return invalid(format!("empty bracket [{lo}, {hi}]"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    while b - a > 2.0 * tol {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = Minimum { argmin: mid, min: g(mid) };
    for x in [lo, hi] {
        let gx = g(x);
        if gx < best.min {
            best = Minimum { argmin: x, min: gx };
        }
    }
    Ok(best)
}
