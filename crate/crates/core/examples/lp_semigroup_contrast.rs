//! `Z₊(t) = T₊(t) SQ₋S*` is a semigroup when `D₊` and `D₋` commute and fails
//! to be one otherwise. Here an inner factor is compared with a smooth phase.

use lpscatter::lp_semigroup::semigroup_defect;
use lpscatter::lp_system::{commutation_residual, LPSystem};
use lpscatter::probes::{random_probes, realize_all, ProbeEnvelope};
use lpscatter::scattering::{Orientation, ScatteringMatrix, SmoothPhase};
use lpscatter::semigroups::make_reproducing;
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let n = 512;
    let mut probes = realize_all(&random_probes(2, 6, 1, None, &ProbeEnvelope::default()), n);
    probes.push(make_reproducing(
        Complex64::new(0.0, -1.0),
        &[Complex64::new(1.0, 0.0)],
        n,
    )?);

    let systems = [
        (
            "inner at 1+i",
            ScatteringMatrix::scalar_product(&[(Complex64::new(1.0, 1.0), Orientation::Inner)])?,
        ),
        (
            "exp(i/(1+λ²))",
            ScatteringMatrix::smooth(SmoothPhase::lorentzian(1.0))?,
        ),
    ];
    for (name, s) in systems {
        let sys = LPSystem::new(s, n, 4)?;
        let (comm, _) = commutation_residual(&sys, &probes)?;
        println!("{name}: commutation residual {comm:.2e}");
        for (t1, t2) in [(0.5, 0.7), (1.0, 2.0)] {
            let d = semigroup_defect(&sys, &probes, t1, t2)?;
            println!(
                "  ‖Z(t₁)Z(t₂)f - Z(t₁+t₂)f‖ at ({t1}, {t2}): {:.3e} of ‖Rf‖, {:.3e} of ‖f‖",
                d.residual, d.residual_vs_input
            );
        }
    }
    Ok(())
}
