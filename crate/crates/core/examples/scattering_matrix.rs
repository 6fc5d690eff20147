//! Building scattering matrices from Blaschke–Potapov factors and applying
//! them to spectral functions.

use lpscatter::hardy::{evaluate_real, SamplingGrid};
use lpscatter::probes::{random_probes, ProbeEnvelope};
use lpscatter::scattering::{
    adjoint_scattering, apply_scattering, eval_scattering, pole_set, rank_one_projector,
    unitarity_residual, BlaschkeFactor, Orientation, ScatteringMatrix, SmoothPhase,
};
use num_complex::Complex64;

fn main() -> lpscatter::Result<()> {
    let c = Complex64::new;
    // 2x2: inner factor acting on e₁ only, then a constant unitary mix
    let p = rank_one_projector(&[c(1.0, 0.0), c(0.0, 0.0)])?;
    let inner = BlaschkeFactor::new(c(0.0, 1.0), p, Orientation::Inner)?;
    let anti = BlaschkeFactor::full(c(1.0, 2.0), 2, Orientation::AntiInner)?;
    let s = ScatteringMatrix::new(
        lpscatter::scattering::KMatrix::identity(2, 2),
        vec![inner, anti],
        None,
    )?;

    for lambda in [-3.0, 0.0, 0.7, 10.0] {
        let m = eval_scattering(&s, c(lambda, 0.0))?;
        println!(
            "λ = {lambda:>5}: ‖S*S - 1‖ = {:.2e}",
            unitarity_residual(&m)
        );
    }
    let poles = pole_set(&s)?;
    println!("poles in ℂ₋ (resonance candidates): {:?}", poles.lower);
    println!("poles in ℂ₊ (anti-inner):            {:?}", poles.upper);
    println!("S is inner: {}", s.is_inner());

    let n = 256;
    let grid = SamplingGrid::for_truncation(n, 4)?;
    let f = random_probes(1, 1, 2, None, &ProbeEnvelope::default())[0].realize(n);
    let sf = apply_scattering(&s, &f, &grid)?;
    let back = apply_scattering(&adjoint_scattering(&s), &sf, &grid)?;
    println!("\n‖Sf‖ - ‖f‖ = {:.2e}", sf.norm() - f.norm());
    println!("‖S*Sf - f‖ = {:.2e}", (&back - &f).norm());

    let lambda = 0.3;
    let direct = eval_scattering(&s, c(lambda, 0.0))?;
    let fv = evaluate_real(&f, lambda);
    let expect = lpscatter::scattering::mat_vec(&direct, &fv);
    let got = evaluate_real(&sf, lambda);
    let err: f64 = expect
        .iter()
        .zip(&got)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!("pointwise (Sf)(0.3) vs S(0.3)f(0.3): {err:.2e}");

    let smooth = ScatteringMatrix::smooth(SmoothPhase::lorentzian(1.0))?;
    println!("\nsmooth phase is rational: {}", smooth.is_rational());
    Ok(())
}
