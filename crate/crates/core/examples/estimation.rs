//! Maximum-likelihood estimation of the spread against the Cramér–Rao bound.
//!
//! cargo run --release --example estimation

use dephasing_limits::circular::Family;
use dephasing_limits::montecarlo::{estimation_risk, mle_estimate, Cost};
use dephasing_limits::numerics::QuadratureGrid;
use dephasing_limits::RngSeed;

fn main() -> dephasing_limits::Result<()> {
    let grid = QuadratureGrid::default();
    let samples = Family::VonMises.density(0.5)?.sample(RngSeed(1), 5000);
    println!("von Mises λ=0.5 from 5000 samples: λ̂ = {:.4}", mle_estimate(Family::VonMises, &samples, (0.05, 5.0))?);

    println!("\nquadratic risk of the MLE, wrapped normal γ=1");
    println!("{:>6} {:>12} {:>12} {:>7}", "n", "risk", "1/(nF)", "ratio");
    for n in [50, 200, 1000] {
        let r = estimation_risk(Family::WrappedNormal, 1.0, n, 500, RngSeed(2), Cost::Quadratic, &grid)?;
        let bound = r.cramer_rao.expect("quadratic cost has a bound");
        println!("{n:>6} {:>12.4e} {bound:>12.4e} {:>7.3}", r.risk, r.risk / bound);
    }
    Ok(())
}
