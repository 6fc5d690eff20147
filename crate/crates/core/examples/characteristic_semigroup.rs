//! The characteristic semigroup `T₊(t) = Q₊ e^{-itλ}` on `H²₊`.
//!
//! Reproducing vectors `k/(λ - ζ)`, `Im ζ < 0`, are eigenvectors with
//! eigenvalue `e^{-itζ}`; everything else in `H²₊` decays.

use lpscatter::hardy::HardySign;
use lpscatter::probes::{random_probes, smooth_probes, ProbeEnvelope};
use lpscatter::semigroups::{
    characteristic_adjoint_apply, characteristic_apply, decay_profile, make_reproducing,
};
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let n = 512;
    let k = [Complex64::new(1.0, 0.0)];

    println!("eigen-relation ‖T₊(t)f - e^{{-itζ}}f‖/‖f‖");
    for zeta in [
        Complex64::new(0.0, -1.0),
        Complex64::new(1.0, -1.0),
        Complex64::new(-1.0, -0.5),
    ] {
        let f = make_reproducing(zeta, &k, n)?;
        for t in [0.5, 1.0, 2.0, 4.0] {
            let lhs = characteristic_apply(&f, t)?;
            let rhs = f.scale((-Complex64::i() * t * zeta).exp());
            println!(
                "  ζ = {zeta:.1}, t = {t}: {:.2e}",
                (&lhs - &rhs).norm() / f.norm()
            );
        }
    }

    let probe = &random_probes(3, 1, 1, Some(HardySign::Plus), &ProbeEnvelope::default())[0];
    let f = probe.realize(n);
    let times = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
    println!("\ndecay ‖T₊(t)f‖ for a random H²₊ element");
    for (t, v) in times.iter().zip(decay_profile(&f, &times)?) {
        println!("  t = {t:>3}: {v:.6}");
    }

    // a simple pole spreads a slow tail out of the window under T₊(t)*;
    // a fifth-order pole keeps the evolved function inside it
    let g = smooth_probes(3, 1, 1, 5)[0].realize(n);
    let back = characteristic_adjoint_apply(&g, 2.0)?;
    println!(
        "\nadjoint is isometric: ‖T₊(2)*g‖ - ‖g‖ = {:.2e} (discarded tail {:.2e})",
        back.function.norm() - g.norm(),
        back.discarded
    );
    Ok(())
}
