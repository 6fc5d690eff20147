//! Resonances of an inner scattering matrix: the surviving eigenvectors of
//! `Z₊(t)` sit exactly at the mirrored zeros, one per unit of Blaschke degree.

use lpscatter::lp_semigroup::{pole_correspondence, prop9_sufficiency_check, survival_test};
use lpscatter::lp_system::{check_commutation, LPSystem};
use lpscatter::probes::{random_probes, realize_all, ProbeEnvelope};
use lpscatter::scattering::{Orientation, ScatteringMatrix};
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let c = Complex64::new;
    let zeros = [c(1.0, 1.0), c(-1.0, 1.0), c(0.0, 2.0)];
    let s = ScatteringMatrix::scalar_product(&zeros.map(|z| (z, Orientation::Inner)))?;
    let n = 256;
    let sys = LPSystem::new(s, n, 4)?;
    let probes = realize_all(&random_probes(9, 8, 1, None, &ProbeEnvelope::default()), n);
    let comm = check_commutation(&sys, &probes)?;

    let pc = pole_correspondence(&sys, &comm)?;
    println!(
        "rank R = {}, total degree = {}",
        pc.resonance_rank, pc.total_multiplicity
    );
    for r in &pc.resonances {
        println!(
            "  ζ = {:.1}: survival {:.1e}, eigen-relation {:.1e}",
            r.zeta, r.survival_residual, r.eigen_residual
        );
    }

    let k = [c(1.0, 0.0)];
    println!("\nsurvival ‖Q₊S*f‖/‖f‖ away from the resonances:");
    for zeta in [c(0.0, -0.5), c(1.5, -1.0), c(0.5, -3.0)] {
        let v = survival_test(&sys, zeta, &k)?;
        println!(
            "  ζ = {zeta:.1}: {:.3e} (survives: {})",
            v.residual, v.survives
        );
    }

    let rep = prop9_sufficiency_check(&sys, c(0.0, -2.0), &k)?;
    println!(
        "\nat ζ = -2i the continuation of S*f is pole-free: {}",
        rep.hypothesis_holds
    );
    for row in &rep.paley_wiener {
        println!(
            "  ∫‖(S*f)(x - i{})‖² dx = {:.4} ≤ {:.4}",
            row.y, row.integral, row.bound
        );
    }
    Ok(())
}
