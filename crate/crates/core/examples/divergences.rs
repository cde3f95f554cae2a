//! Divergences between channel densities and the exponents built on them.
//!
//! cargo run --example divergences

use dephasing_limits::circular::Family;
use dephasing_limits::divergences::{
    chernoff, fisher_information, hoeffding_exponent, min_pairwise_chernoff, multivariate_chernoff, relative_entropy,
    relative_entropy_variance, renyi, stein_second_order, strong_converse_exponent,
};
use dephasing_limits::numerics::QuadratureGrid;

fn main() -> dephasing_limits::Result<()> {
    let grid = QuadratureGrid::default();

    println!("Chernoff divergence against parameter 1 (one column per family)");
    for x in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let mut row = format!("{x:>5}");
        for f in Family::ALL {
            let c = chernoff(&f.density(1.0)?, &f.density(x)?, &grid)?;
            row += &format!("  C={:.5} s*={:.3}", c.value, c.argmin().unwrap());
        }
        println!("{row}");
    }

    let wn = |g| Family::WrappedNormal.density(g);
    let (p, q) = (wn(1.0)?, wn(3.0)?);
    let d = relative_entropy(&p, &q, &grid)?;
    let v = relative_entropy_variance(&p, &q, &grid)?;
    println!("\nwn(1) vs wn(3): D = {:.6} ± {:.1e}, V = {:.6}", d.value, d.quad_error, v.value);
    for a in [0.5, 2.0] {
        println!("  D_{a} = {:.6}", renyi(&p, &q, a, &grid)?.value);
    }
    for n in [10, 100, 1000] {
        println!("  Stein exponent at n={n}, ε=0.05: {:.6}", stein_second_order(&p, &q, n, 0.05, &grid)?);
    }
    let sc = strong_converse_exponent(&p, &q, 2.0 * d.value, &grid)?;
    let ho = hoeffding_exponent(&p, &q, 0.5 * d.value, &grid)?;
    println!("  strong converse at r=2D: {:.6} (α*={:.3})", sc.value, sc.argmin().unwrap());
    println!("  Hoeffding at r=D/2:      {:.6} (α*={:.3})", ho.value, ho.argmin().unwrap());

    let three = [wn(0.5)?, wn(1.0)?, wn(2.0)?];
    println!("\nthree channels: multivariate C = {:.6}", multivariate_chernoff(&three, &grid)?.value);
    println!("                min pairwise C = {:.6}", min_pairwise_chernoff(&three, &grid)?.value);

    println!("\nFisher information");
    for t in [0.1, 1.0, 10.0] {
        let row: Vec<String> = Family::ALL
            .iter()
            .map(|&f| fisher_information(f, t, &grid).map(|x| format!("{}={x:.4e}", f.tag())))
            .collect::<Result<_, _>>()?;
        println!("  θ={t:<4} {}", row.join("  "));
    }
    Ok(())
}
