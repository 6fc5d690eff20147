//! The identification operator `Ĵ = Q₋ + SQ₊` and its isometry defect.
//!
//! `Ĵ` is isometric exactly when `S` is inner. For an anti-inner factor the
//! defect `Ĵ*Ĵ - 1` is nonzero, but it fades along the reference evolution.

use lpscatter::lp_system::{
    asymptotic_equivalence_profile, check_isometry_equivalences, gram_defect, LPSystem,
};
use lpscatter::probes::{random_probes, realize_all, ProbeEnvelope};
use lpscatter::scattering::{Orientation, ScatteringMatrix};
use lpscatter::semigroups::make_reproducing;
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let n = 256;
    let probes = realize_all(&random_probes(5, 8, 1, None, &ProbeEnvelope::default()), n);
    let mu = Complex64::new(0.0, 1.0);

    for orientation in [Orientation::Inner, Orientation::AntiInner] {
        let s = ScatteringMatrix::scalar_product(&[(mu, orientation)])?;
        let sys = LPSystem::new(s, n, 4)?;
        let rep = check_isometry_equivalences(&sys, &probes)?;
        println!("{orientation:?}:");
        println!("  ‖(Ĵ*Ĵ - 1)f‖/‖f‖ = {:.3e}", rep.gram);
        println!("  ‖D₊D₋f‖/‖f‖     = {:.3e}", rep.orthogonality);
        println!("  ‖Q₋SQ₊f‖/‖f‖    = {:.3e}", rep.hankel);
        println!("  isometric: {}", rep.isometric);
    }

    let s = ScatteringMatrix::scalar_product(&[(mu, Orientation::AntiInner)])?;
    let sys = LPSystem::new(s, n, 4)?;
    let f = make_reproducing(Complex64::new(0.0, -1.0), &[Complex64::new(1.0, 0.0)], n)?;
    println!(
        "\nanti-inner defect on 1/(λ+i): {:.4}",
        gram_defect(&sys, &f)?.norm()
    );
    println!("profile ‖(Ĵ*Ĵ - 1) e^{{-itλ}} f‖:");
    for p in asymptotic_equivalence_profile(&sys, &f, &[-8.0, -2.0, 0.0, 2.0, 8.0])? {
        println!("  t = {:>4}: {:.6}", p.t, p.norm);
    }
    Ok(())
}
