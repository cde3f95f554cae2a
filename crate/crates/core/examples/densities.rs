//! The three circular families: evaluation, sampling, and a CSV table.
//!
//! cargo run --example densities

use dephasing_limits::circular::{l1_distance, Family};
use dephasing_limits::numerics::QuadratureGrid;
use dephasing_limits::RngSeed;

fn main() -> dephasing_limits::Result<()> {
    let grid = QuadratureGrid::default();
    println!("{:>15} {:>6} {:>10} {:>10} {:>10}", "family", "param", "pdf(0)", "pdf(π)", "KS(1e5)");
    for (f, family) in Family::ALL.into_iter().enumerate() {
        for (k, param) in [0.1, 1.0, 10.0].into_iter().enumerate() {
            let d = family.density(param)?;
            let ks = d.ks_statistic(&d.sample(RngSeed((3 * f + k) as u64), 100_000));
            println!(
                "{:>15} {param:>6} {:>10.6} {:>10.6} {ks:>10.5}",
                family.to_string(),
                d.pdf(0.0),
                d.pdf(std::f64::consts::PI)
            );
        }
    }

    let (a, b) = (Family::WrappedNormal.density(1.0)?, Family::WrappedNormal.density(2.0)?);
    println!("\nL1(wn(1), wn(2)) = {:.6}", l1_distance(&a, &b, &grid)?);

    // a tabulated density round-trips through the `phi,pdf` CSV format
    let table = Family::VonMises.density(0.5)?.tabulate(8)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    print!("\n{}", String::from_utf8_lossy(&csv));
    Ok(())
}
