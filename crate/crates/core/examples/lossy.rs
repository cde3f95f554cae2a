//! The photon-number scheme behind a pure-loss channel.
//!
//! cargo run --example lossy

use dephasing_limits::circular::CircularDensity;
use dephasing_limits::divergences::relative_entropy;
use dephasing_limits::numerics::QuadratureGrid;
use dephasing_limits::schemes::{LossyFejer, SchemeChannel};

fn main() -> dephasing_limits::Result<()> {
    for eta in [1.0, 0.8, 0.3] {
        let pmf = LossyFejer::new(8, eta)?.pmf(0.5)?;
        println!("d=8 η={eta}: {:.3?}", pmf);
    }

    let p = CircularDensity::wrapped_normal(1.0)?;
    let q = CircularDensity::wrapped_normal(2.0)?;
    println!(
        "\nD(wn(1) ‖ wn(2)) = {:.5}; retained by the d=20 scheme:",
        relative_entropy(&p, &q, &QuadratureGrid::default())?.value
    );
    for eta in [0.3, 0.5, 0.7, 0.9, 1.0] {
        let s = SchemeChannel::lossy_fejer(20, eta)?;
        let (ip, iq) = (s.induce(&p, 64)?, s.induce(&q, 64)?);
        let d = relative_entropy(&ip, &iq, &CircularDensity::grid_for(&[&ip, &iq], 64)?)?;
        println!("  η={eta:<4} {:.5}", d.value);
    }
    Ok(())
}
