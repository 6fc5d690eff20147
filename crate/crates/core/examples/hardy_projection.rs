//! Splitting a rational function into its Hardy components.
//!
//! `g` has poles on both sides of the real axis. `Q₊g` keeps the ones below
//! (analytic in ℂ₊), and its value inside ℂ₊ is checked against a direct
//! Cauchy integral of the boundary values. Parseval is checked against line
//! quadrature.
//!
//! ```bash
//! cargo run --example hardy_projection
//! ```

use lpscatter::hardy::{evaluate_upper, hardy_project, HardySign};
use lpscatter::probes::{PoleTerm, RationalProbe};
use lpscatter::quadrature::{cauchy_project_oracle, l2_norm_sqr_oracle, OracleConfig};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> lpscatter::Result<()> {
    let g = RationalProbe::new(vec![
        PoleTerm {
            pole: c(0.5, -0.7),
            k: vec![c(1.0, 0.0)],
        },
        PoleTerm {
            pole: c(-1.0, 0.4),
            k: vec![c(0.0, 2.0)],
        },
        PoleTerm {
            pole: c(2.0, -1.5),
            k: vec![c(-0.5, 0.5)],
        },
    ])?;
    let n = 512;
    let f = g.realize(n);
    let plus = hardy_project(&f, HardySign::Plus);
    let minus = hardy_project(&f, HardySign::Minus);
    println!("‖f‖² = {:.12}", f.norm_sqr());
    println!(
        "‖Q₊f‖² + ‖Q₋f‖² = {:.12}",
        plus.norm_sqr() + minus.norm_sqr()
    );

    let cfg = OracleConfig::default();
    let quad = l2_norm_sqr_oracle(|x| g.value(c(x, 0.0)), &cfg)?;
    println!("∫|g|² by quadrature = {quad:.12}");

    println!(
        "\n{:>14} {:>28} {:>28} {:>10}",
        "z", "(Q₊g)(z) basis", "Cauchy oracle", "|diff|"
    );
    for z in [c(0.0, 1.0), c(1.5, 0.5), c(-2.0, 2.0)] {
        let basis = evaluate_upper(&f, z)?[0];
        let oracle = cauchy_project_oracle(|x| g.value(c(x, 0.0)), 1, z, &cfg)?[0];
        println!(
            "{:>14} {:>28} {:>28} {:>10.2e}",
            format!("{z:.2}"),
            format!("{basis:.10}"),
            format!("{oracle:.10}"),
            (basis - oracle).norm()
        );
    }
    Ok(())
}
