//! Exact classical limits for discriminating and estimating bosonic
//! dephasing channels.
//!
//! A dephasing channel rotates a bosonic mode by a random angle drawn from a
//! density `p` on `[-π, π]`. Every discrimination and estimation limit for
//! such channels reduces to a classical quantity of `p`, which this crate
//! computes:
//!
//! * [`circular`]: the wrapped normal, von Mises and wrapped Cauchy
//!   families, sampling, L1 distance;
//! * [`divergences`]: relative entropy and its variance, Rényi and Chernoff
//!   divergences, Fisher information, and the exponents built on them;
//! * [`schemes`]: the output laws of the two measurement schemes that attain
//!   those limits as their energy grows, plus the lossy variant;
//! * [`montecarlo`]: Bayes and Neyman–Pearson tests and maximum-likelihood
//!   estimation on simulated samples;
//! * [`cli`]: the `dephasing` binary's CSV commands.
//!
//! ```
//! use dephasing_limits::circular::Family;
//! use dephasing_limits::divergences::chernoff;
//! use dephasing_limits::numerics::QuadratureGrid;
//!
//! let grid = QuadratureGrid::default();
//! let p = Family::WrappedNormal.density(1.0)?;
//! let q = Family::WrappedNormal.density(2.0)?;
//! let c = chernoff(&p, &q, &grid)?;
//! assert!(c.value > 0.0);
//! # Ok::<(), dephasing_limits::Error>(())
//! ```

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circular;
pub mod cli;
pub mod divergences;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod schemes;
pub mod seed;

pub use circular::{CircularDensity, Family, PhaseSample};
pub use divergences::DivergenceReport;
pub use error::{Error, Result};
pub use montecarlo::{TestOutcome, TestSpec};
pub use numerics::QuadratureGrid;
pub use schemes::SchemeChannel;
pub use seed::RngSeed;
