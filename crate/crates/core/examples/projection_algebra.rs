//! When the outgoing and incoming projections `D₊ = Q₊`, `D₋ = SQ₋S*`
//! commute, `A = Q₊S*Q₋` generates a self-adjoint `V = A + A*` with spectrum
//! in `{-1, 0, 1}`, and its spectral projections `E`, `F` have equal rank.
//!
//! ```bash
//! cargo run --release --example projection_algebra
//! ```

use lpscatter::lp_system::{check_commutation, theorem1_decompose, CommutationVerdict, LPSystem};
use lpscatter::probes::{random_probes, realize_all, ProbeEnvelope};
use lpscatter::scattering::{Orientation, ScatteringMatrix, SmoothPhase};
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let n = 256;
    let c = Complex64::new;
    let cases = [
        (
            "inner at i",
            ScatteringMatrix::scalar_product(&[(c(0.0, 1.0), Orientation::Inner)])?,
        ),
        (
            "anti-inner at i",
            ScatteringMatrix::scalar_product(&[(c(0.0, 1.0), Orientation::AntiInner)])?,
        ),
        (
            "anti-inner at ±1+i",
            ScatteringMatrix::scalar_product(&[
                (c(1.0, 1.0), Orientation::AntiInner),
                (c(-1.0, 1.0), Orientation::AntiInner),
            ])?,
        ),
        (
            "smooth phase",
            ScatteringMatrix::smooth(SmoothPhase::lorentzian(1.0))?,
        ),
    ];
    let probes = realize_all(&random_probes(11, 8, 1, None, &ProbeEnvelope::default()), n);
    for (name, s) in cases {
        let sys = LPSystem::new(s, n, 4)?;
        let rep = check_commutation(&sys, &probes)?;
        print!("{name:<20} commutation {:.2e} ", rep.residual);
        if rep.verdict != CommutationVerdict::Commuting {
            println!("-> no decomposition");
            continue;
        }
        let alg = theorem1_decompose(&sys, &rep)?;
        println!(
            "-> rank E = {}, rank F = {}, spectrum {:?}, worst residual {:.1e}",
            alg.rank_e,
            alg.rank_f,
            alg.nonzero_spectrum
                .iter()
                .map(|x| (x * 1e6).round() / 1e6)
                .collect::<Vec<_>>(),
            alg.residuals.max()
        );
    }
    Ok(())
}
