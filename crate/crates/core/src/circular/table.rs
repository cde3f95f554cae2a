use std::f64::consts::{PI, TAU};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "phi,pdf";

/// A density given by values at sorted angles, interpolated linearly and
/// periodically (the last point connects to the first across `±π`).
///
/// Values are rescaled at construction so the interpolant integrates to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    angles: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(angles: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if angles.len() != values.len() {
            return Err(Error::Table(format!("{} angles but {} values", angles.len(), values.len())));
        }
        if angles.len() < 3 {
            return Err(Error::Table("need at least 3 points".into()));
        }
        if angles.iter().any(|a| !(-PI..=PI).contains(a)) {
            return Err(Error::Table("angles must lie in [-π, π]".into()));
        }
        if angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Table("angles must be strictly increasing".into()));
        }
        if angles[angles.len() - 1] - angles[0] >= TAU {
            return Err(Error::Table("table must not list both -π and π".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Table(format!("values must be positive and finite, got {v}")));
        }
        // exact integral of the periodic piecewise-linear interpolant
        let n = angles.len();
        let total: f64 = (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                let gap = if j == 0 { angles[0] + TAU - angles[i] } else { angles[j] - angles[i] };
                0.5 * gap * (values[i] + values[j])
            })
            .sum();
        for v in &mut values {
            *v /= total;
        }
        Ok(TabulatedDensity { angles, values })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pdf(&self, phi: f64) -> f64 {
        let phi = crate::circular::wrap_angle(phi);
        let n = self.angles.len();
        let i = self.angles.partition_point(|&a| a <= phi);
        // segment [left, right], possibly wrapping across ±π
        let (xl, yl, xr, yr) = if i == 0 {
            (self.angles[n - 1] - TAU, self.values[n - 1], self.angles[0], self.values[0])
        } else if i == n {
            (self.angles[n - 1], self.values[n - 1], self.angles[0] + TAU, self.values[0])
        } else {
            (self.angles[i - 1], self.values[i - 1], self.angles[i], self.values[i])
        };
        let t = (phi - xl) / (xr - xl);
        yl + t * (yr - yl)
    }

    /// Reads a two-column `phi,pdf` CSV with a header row.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Table("empty file".into()))??;
        if header.trim() != CSV_HEADER {
            return Err(Error::Table(format!("expected header `{CSV_HEADER}`, found `{}`", header.trim())));
        }
        let mut angles = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let parse = |c: Option<&str>| -> Result<f64> {
                c.map(str::trim)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Table(format!("line {}: expected two numbers", lineno + 2)))
            };
            angles.push(parse(cols.next())?);
            values.push(parse(cols.next())?);
            if cols.next().is_some() {
                return Err(Error::Table(format!("line {}: too many columns", lineno + 2)));
            }
        }
        Self::new(angles, values)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for (a, v) in self.angles.iter().zip(&self.values) {
            writeln!(w, "{a:e},{v:e}")?;
        }
        Ok(())
    }
}
