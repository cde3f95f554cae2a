//! Quadrature over the circle, scalar minimization, and special functions.
//!
//! Everything here is a pure function of its inputs.

mod optimize;
mod quadrature;
mod special;

pub use optimize::{minimize_unimodal, Minimum};
pub use quadrature::{
    gauss_legendre, integrate_periodic, log_integral_exp, Estimate, QuadratureGrid, DEFAULT_ORDER, DEFAULT_PANELS,
};
pub use special::{bessel_i0, erf, erfc, log_bessel_i0, normal_cdf, phi_inv};
