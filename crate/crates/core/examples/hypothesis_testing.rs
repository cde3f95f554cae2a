//! Simulated Bayes and Neyman–Pearson tests next to their predicted rates.
//!
//! cargo run --release --example hypothesis_testing

use dephasing_limits::circular::Family;
use dephasing_limits::divergences::{bayes_error_exact_n1, chernoff, relative_entropy, stein_second_order};
use dephasing_limits::montecarlo::{bayes_test, neyman_pearson, scheme_end_to_end, TestSpec};
use dephasing_limits::numerics::QuadratureGrid;
use dephasing_limits::schemes::SchemeChannel;

fn main() -> dephasing_limits::Result<()> {
    let grid = QuadratureGrid::default();
    let p = Family::WrappedNormal.density(1.0)?;
    let q = Family::WrappedNormal.density(3.0)?;
    let c = chernoff(&p, &q, &grid)?.value;
    let d = relative_entropy(&p, &q, &grid)?.value;

    let one = bayes_test(&p, &q, &TestSpec::bayes(0.5, 1, 100_000, 1)?)?;
    println!(
        "n=1 error: simulated {:.5} ± {:.5}, exact {:.5}",
        one.average_error(0.5),
        one.average_ci(0.5),
        bayes_error_exact_n1(&p, &q, 0.5, &grid)?
    );

    println!("\nBayes exponent −ln(P_e)/n (Chernoff C = {c:.4})");
    for n in [5, 10, 20, 40] {
        let o = bayes_test(&p, &q, &TestSpec::bayes(0.5, n, 20_000, 2)?)?;
        println!("  n={n:<3} {:.4}", -o.average_error(0.5).ln() / n as f64);
    }

    println!("\nNeyman–Pearson exponent −ln(β)/n at ε=0.05 (D = {d:.4})");
    for n in [50, 100, 200] {
        let o = neyman_pearson(&p, &q, &TestSpec::neyman_pearson(0.05, n, 20_000, 3)?)?;
        let predicted = stein_second_order(&p, &q, n, 0.05, &grid)?;
        println!(
            "  n={n:<3} simulated {:.4} (α̂={:.3}), predicted {predicted:.4}",
            -o.beta_hat.ln() / n as f64,
            o.alpha_hat
        );
    }

    println!("\nBayes error at n=20 through the photon-number scheme");
    for dl in [8, 32, 128] {
        let o = scheme_end_to_end(&SchemeChannel::fejer(dl)?, &p, &q, &TestSpec::bayes(0.5, 20, 10_000, 4)?, 64)?;
        println!("  d={dl:<4} {:.4} ± {:.4}", o.average_error(0.5), o.average_ci(0.5));
    }
    Ok(())
}
