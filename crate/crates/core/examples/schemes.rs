//! The two measurement schemes: how much of the channel density they
//! recover, and how much relative entropy survives at fixed energy.
//!
//! cargo run --example schemes

use dephasing_limits::circular::{l1_distance, CircularDensity};
use dephasing_limits::divergences::relative_entropy;
use dephasing_limits::numerics::QuadratureGrid;
use dephasing_limits::schemes::{fejer_pmf, SchemeChannel};

fn main() -> dephasing_limits::Result<()> {
    let base = CircularDensity::wrapped_normal(1.0)?;
    let l1 = |s: SchemeChannel| -> dephasing_limits::Result<f64> {
        let induced = s.induce(&base, 64)?;
        l1_distance(&base, &induced, &CircularDensity::grid_for(&[&base, &induced], 64)?)
    };
    println!("outcome law of the d=8 superposition at φ=0.3: {:.3?}", fejer_pmf(8, 0.3)?);
    println!("\nL1 distance to wn(1)");
    for d in [8, 16, 32, 64, 128] {
        println!("  photon   d={d:<4} {:.5}", l1(SchemeChannel::fejer(d)?)?);
    }
    for a in [1.0, 2.0, 4.0, 8.0, 12.0] {
        println!("  coherent α={a:<4} {:.5}", l1(SchemeChannel::rician(a)?)?);
    }

    // same mean photon number 9.5 for both probes
    let photon = SchemeChannel::fejer(20)?;
    let coherent = SchemeChannel::rician_with_energy(9.5)?;
    println!("\nrelative entropy D(wn(1) ‖ wn(γ₂)) and what each scheme keeps");
    println!("{:>6} {:>10} {:>10} {:>10}", "γ₂", "limit", "photon", "coherent");
    let grid = QuadratureGrid::default();
    for g2 in [0.5, 1.5, 2.0, 3.0] {
        let q = CircularDensity::wrapped_normal(g2)?;
        let mut row = vec![relative_entropy(&base, &q, &grid)?.value];
        for s in [&photon, &coherent] {
            let (ip, iq) = (s.induce(&base, 64)?, s.induce(&q, 64)?);
            row.push(relative_entropy(&ip, &iq, &CircularDensity::grid_for(&[&ip, &iq], 64)?)?.value);
        }
        println!("{g2:>6} {:>10.5} {:>10.5} {:>10.5}", row[0], row[1], row[2]);
    }
    Ok(())
}
