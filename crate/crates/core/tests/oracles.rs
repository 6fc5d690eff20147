//! Independent oracles and property tests.
//!
//! Every expected value here comes from closed-form rational algebra or a
//! quadrature written in this file, never from the library's own routines.

use std::f64::consts::PI;

use lpscatter::hardy::{
    analyze, basis_value, evaluate_real, evaluate_upper, synthesize, HardySign, SamplingGrid,
    SpectralFunction,
};
use lpscatter::lp_semigroup::{
    lp_semigroup_apply, prop9_sufficiency_check, resonance_apply, survival_test,
};
use lpscatter::lp_system::{gram_defect, identification_apply, LPSystem};
use lpscatter::probes::{random_probes, smooth_probes, PoleTerm, ProbeEnvelope, RationalProbe};
use lpscatter::scattering::{
    apply_scattering, eval_scattering, rank_one_projector, unitarity_residual, BlaschkeFactor,
    KMatrix, Orientation, ScatteringMatrix,
};
use lpscatter::semigroups::{
    characteristic_adjoint_apply, characteristic_apply, decay_profile, make_reproducing,
    reference_evolve,
};
use num_complex::Complex64;
use proptest::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one() -> Vec<Complex64> {
    vec![c(1.0, 0.0)]
}

fn inner_at_i() -> LPSystem {
    let s = ScatteringMatrix::scalar_product(&[(I, Orientation::Inner)]).unwrap();
    LPSystem::new(s, 256, 4).unwrap()
}

fn anti_at_i() -> LPSystem {
    let s = ScatteringMatrix::scalar_product(&[(I, Orientation::AntiInner)]).unwrap();
    LPSystem::new(s, 256, 4).unwrap()
}

/// `(Q₊g)(z)` for `g = Σ kⱼ/(λ - pⱼ)` by residues: only poles below the axis survive.
fn residue_upper(g: &RationalProbe, z: Complex64) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); g.terms[0].k.len()];
    for t in g.terms.iter().filter(|t| t.pole.im < 0.0) {
        for (o, k) in out.iter_mut().zip(&t.k) {
            *o += k / (z - t.pole);
        }
    }
    out
}

/// `⟨φₙ, k/(λ - ζ)⟩` for `Im ζ < 0`: closing the contour below picks up
/// only the pole at `ζ`, giving `-2i√π (ζ + i)ⁿ / (ζ - i)ⁿ⁺¹` for `n ≥ 0`.
fn reproducing_coeff(zeta: Complex64, n: i64) -> Complex64 {
    if n < 0 {
        return c(0.0, 0.0);
    }
    -2.0 * I * PI.sqrt() * (zeta + I).powi(n as i32) / (zeta - I).powi(n as i32 + 1)
}

/// `∫ ‖g(λ)‖² dλ` through `λ = tan(θ/2)`; the periodic trapezoid rule is
/// spectrally accurate for rational `g` decaying like `1/λ`.
fn circle_quadrature(g: impl Fn(f64) -> Vec<Complex64>, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|j| {
            let theta = -PI + (j as f64 + 0.5) * h;
            let lambda = (theta / 2.0).tan();
            let jac = 0.5 / (theta / 2.0).cos().powi(2);
            g(lambda).iter().map(|v| v.norm_sqr()).sum::<f64>() * jac
        })
        .sum::<f64>()
        * h
}

fn vnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn random_coeffs(dim: usize, trunc: usize, seed: u64) -> SpectralFunction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..2 * trunc * dim)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpectralFunction::from_coeffs(dim, trunc, coeffs).unwrap()
}

// ------------------------------------------------------------ closed forms

#[test]
fn phi0_at_zero_is_minus_i_over_sqrt_pi() {
    let v = basis_value(0, c(0.0, 0.0));
    assert!((v - (-I / PI.sqrt())).norm() < 1e-15);
}

#[test]
fn phi1_at_one_matches_basis_formula_and_transform() {
    let direct = (c(1.0, -1.0)) / (c(1.0, 1.0) * c(1.0, 1.0)) / PI.sqrt();
    assert!((basis_value(1, c(1.0, 0.0)) - direct).norm() < 1e-15);
    let f = SpectralFunction::basis_element(16, 1, &one()).unwrap();
    assert!((evaluate_real(&f, 1.0)[0] - direct).norm() < 1e-14);
}

#[test]
fn reproducing_vector_coefficients_match_residue_formula() {
    for zeta in [c(0.0, -1.0), c(0.7, -0.4), c(-2.0, -1.5)] {
        let f = make_reproducing(zeta, &one(), 256).unwrap();
        for n in -5..40 {
            let expect = reproducing_coeff(zeta, n);
            assert!(
                (f.coeff(n)[0] - expect).norm() < 1e-12,
                "ζ = {zeta}, n = {n}: {} vs {expect}",
                f.coeff(n)[0]
            );
        }
    }
    // ζ = -i collapses to √π φ₀
    let f = make_reproducing(-I, &one(), 64).unwrap();
    assert!((f.coeff(0)[0] - PI.sqrt()).norm() < 1e-14);
    assert!(f.coeff(1)[0].norm() < 1e-14);
}

#[test]
fn reproducing_norm_is_pi_over_im() {
    for zeta in [-I, c(1.0, -0.5), c(0.0, -2.0)] {
        let f = make_reproducing(zeta, &one(), 512).unwrap();
        let expect = PI / zeta.im.abs();
        assert!((f.norm_sqr() - expect).abs() / expect < 1e-10);
    }
}

#[test]
fn samples_of_kernel_analyze_to_its_expansion() {
    let (n, grid) = (128, SamplingGrid::for_truncation(128, 4).unwrap());
    let f = make_reproducing(-I, &one(), n).unwrap();
    let samples = synthesize(&f, &grid).unwrap();
    for (m, lambda) in grid.nodes().iter().enumerate().step_by(37) {
        let expect = 1.0 / (lambda - (-I));
        assert!((samples.at(m)[0] - expect).norm() < 1e-12);
    }
    let back = analyze(&samples, &grid, n).unwrap();
    assert!((&back - &f).norm() < 1e-12);
}

#[test]
fn hardy_projection_of_one_sided_kernels() {
    let f = make_reproducing(c(0.0, -2.0), &one(), 256).unwrap();
    assert!((&f.hardy_project(HardySign::Plus) - &f).norm() < 1e-14);
    let g = RationalProbe::new(vec![PoleTerm {
        pole: c(0.0, 2.0),
        k: one(),
    }])
    .unwrap()
    .realize(256);
    assert!(g.hardy_project(HardySign::Plus).norm() < 1e-14);
    assert!(evaluate_upper(&g, I).unwrap()[0].norm() < 1e-14);
}

#[test]
fn evaluate_upper_on_kernel() {
    let f = make_reproducing(-I, &one(), 64).unwrap();
    let v = evaluate_upper(&f, I).unwrap()[0];
    assert!((v - (-I / 2.0)).norm() < 1e-14);
}

#[test]
fn hardy_projection_agrees_with_residue_oracle() {
    let env = ProbeEnvelope {
        min_im: 0.25,
        ..ProbeEnvelope::default()
    };
    for g in random_probes(17, 20, 2, None, &env) {
        let f = g.realize(512);
        for z in [I, c(1.5, 0.5), c(-2.0, 2.0)] {
            let a = evaluate_upper(&f, z).unwrap();
            let b = residue_upper(&g, z);
            let d: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            assert!(vnorm(&d) <= 1e-8 * (1.0 + vnorm(&b)), "z = {z}");
        }
    }
}

#[test]
fn parseval_against_circle_quadrature() {
    for g in random_probes(23, 10, 2, None, &ProbeEnvelope::default()) {
        let f = g.realize(512);
        let quad = circle_quadrature(|x| g.value(c(x, 0.0)), 1 << 14);
        assert!((f.norm_sqr() - quad).abs() / quad < 1e-8);
    }
}

#[test]
fn boundary_value_formula() {
    // ⟨f_{ζ̄,k}, g⟩ = 2πi (k, g(ζ)) with g(ζ) from residues
    let gs = random_probes(5, 5, 2, Some(HardySign::Plus), &ProbeEnvelope::default());
    let k = vec![c(0.3, -0.2), c(-0.7, 0.5)];
    for zeta in [
        c(0.0, 1.0),
        c(1.0, 0.4),
        c(-1.5, 2.0),
        c(0.2, 0.8),
        c(2.0, 1.0),
    ] {
        let fk = make_reproducing(zeta.conj(), &k, 512).unwrap();
        for g in &gs {
            let gf = g.realize(512);
            let gz = residue_upper(g, zeta);
            let rhs: Complex64 = 2.0
                * PI
                * I
                * k.iter()
                    .zip(&gz)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>();
            let lhs = fk.inner(&gf);
            assert!((lhs - rhs).norm() / (gf.norm() * vnorm(&k)) < 1e-8);
        }
    }
}

#[test]
fn inner_factor_values() {
    let s = ScatteringMatrix::scalar_product(&[(I, Orientation::Inner)]).unwrap();
    assert!((eval_scattering(&s, c(0.0, 0.0)).unwrap()[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
    assert!((eval_scattering(&s, c(1e9, 0.0)).unwrap()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-8);
    let p = lpscatter::scattering::pole_set(&s).unwrap();
    assert_eq!(p.lower, vec![(-I, 1)]);
}

#[test]
fn inner_factor_times_kernel_is_phi1() {
    // ((λ-i)/(λ+i)) · 1/(λ+i) = √π φ₁
    let sys = inner_at_i();
    let f = make_reproducing(-I, &one(), 256).unwrap();
    let sf = sys.apply_s(&f).unwrap();
    let expect = SpectralFunction::basis_element(256, 1, &[c(PI.sqrt(), 0.0)]).unwrap();
    assert!((&sf - &expect).norm() < 1e-12);
}

#[test]
fn constant_unitary_acts_coefficientwise() {
    let r = 0.5f64.sqrt();
    let u = KMatrix::from_fn(2, 2, |i, j| if i == j { c(r, 0.0) } else { c(0.0, r) });
    let s = ScatteringMatrix::constant(u.clone()).unwrap();
    let grid = SamplingGrid::for_truncation(32, 4).unwrap();
    let f = random_coeffs(2, 32, 3);
    let sf = apply_scattering(&s, &f, &grid).unwrap();
    for n in f.indices() {
        let x = f.coeff(n);
        for i in 0..2 {
            let expect = u[(i, 0)] * x[0] + u[(i, 1)] * x[1];
            assert!((sf.coeff(n)[i] - expect).norm() < 1e-13);
        }
    }
}

#[test]
fn random_blaschke_product_is_unitary_on_the_grid() {
    let p = rank_one_projector(&[c(1.0, 0.5), c(-0.3, 1.0)]).unwrap();
    let s = ScatteringMatrix::new(
        KMatrix::identity(2, 2),
        vec![
            BlaschkeFactor::new(c(0.5, 0.8), p, Orientation::Inner).unwrap(),
            BlaschkeFactor::full(c(-1.0, 1.3), 2, Orientation::AntiInner).unwrap(),
            BlaschkeFactor::full(c(2.0, 0.4), 2, Orientation::Inner).unwrap(),
        ],
        None,
    )
    .unwrap();
    let grid = SamplingGrid::for_truncation(128, 4).unwrap();
    let worst = grid
        .nodes()
        .iter()
        .map(|&l| unitarity_residual(&eval_scattering(&s, l).unwrap()))
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12);
}

#[test]
fn kernel_eigen_relation_and_modulus() {
    let zeta = c(0.0, -0.5);
    let f = make_reproducing(zeta, &one(), 512).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let g = characteristic_apply(&f, t).unwrap();
        assert!((&g - &f.scale(c((-0.5 * t).exp(), 0.0))).norm() / f.norm() < 1e-10);
    }
    let zeta = c(1.0, -1.0);
    let f = make_reproducing(zeta, &one(), 512).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let ratio = characteristic_apply(&f, t).unwrap().norm() / f.norm();
        assert!((ratio - (t * zeta.im).exp()).abs() < 1e-10);
    }
}

#[test]
fn decay_profile_of_kernels() {
    let k = one();
    let a = make_reproducing(-I, &k, 512).unwrap();
    let b = make_reproducing(c(0.0, -2.0), &k, 512).unwrap();
    let times = [0.0, 0.5, 1.0, 2.0, 4.0];
    for (t, v) in times.iter().zip(decay_profile(&a, &times).unwrap()) {
        assert!((v - (-t).exp() * a.norm()).abs() < 1e-10);
    }
    let mix = &a + &b;
    for (t, v) in times.iter().zip(decay_profile(&mix, &times).unwrap()) {
        let bound = (-t).exp() * a.norm() + (-2.0 * t).exp() * b.norm();
        assert!(v <= bound + 1e-10);
    }
}

#[test]
fn identification_on_each_half() {
    let sys = inner_at_i();
    let g = RationalProbe::new(vec![PoleTerm {
        pole: c(0.5, 1.0),
        k: one(),
    }])
    .unwrap()
    .realize(256);
    assert!((&identification_apply(&sys, &g).unwrap() - &g).norm() < 1e-14);
    let f = make_reproducing(c(0.3, -0.8), &one(), 256).unwrap();
    let expect = sys.apply_s(&f).unwrap();
    assert!((&identification_apply(&sys, &f).unwrap() - &expect).norm() < 1e-14);
}

#[test]
fn anti_inner_gram_defect_on_kernel_is_sqrt_pi() {
    // f = 1/(λ+i) ∈ H²₊; S f = 1/(λ-i) ∈ H²₋, so (Ĵ*Ĵ - 1) f = Q₋Sf = 1/(λ-i)
    let sys = anti_at_i();
    let f = make_reproducing(-I, &one(), 256).unwrap();
    let d = gram_defect(&sys, &f).unwrap();
    assert!((d.norm() - PI.sqrt()).abs() < 1e-12);
    let expect = RationalProbe::new(vec![PoleTerm { pole: I, k: one() }])
        .unwrap()
        .realize(256);
    assert!((&d - &expect).norm() < 1e-12);
}

#[test]
fn survival_partial_fractions() {
    // S* f_{ζ,1} = (λ+i)/((λ-i)(λ-ζ)); its H²₊ part is ((ζ+i)/(ζ-i))/(λ-ζ)
    let sys = inner_at_i();
    let at_zero = survival_test(&sys, -I, &one()).unwrap();
    assert!(at_zero.survives && at_zero.residual < 1e-12);
    let off = survival_test(&sys, c(0.0, -2.0), &one()).unwrap();
    assert!((off.residual - 1.0 / 3.0).abs() < 1e-10);
    assert!(!off.survives);
}

#[test]
fn survival_needs_direction_in_factor_range() {
    let p = rank_one_projector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let s = ScatteringMatrix::new(
        KMatrix::identity(2, 2),
        vec![BlaschkeFactor::new(I, p, Orientation::Inner).unwrap()],
        None,
    )
    .unwrap();
    let sys = LPSystem::new(s, 256, 4).unwrap();
    assert!(
        survival_test(&sys, -I, &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap()
            .survives
    );
    let e2 = survival_test(&sys, -I, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(!e2.survives && (e2.residual - 1.0).abs() < 1e-12);
}

#[test]
fn lp_semigroup_on_resonance_and_complement() {
    let sys = inner_at_i();
    let f = make_reproducing(-I, &one(), 256).unwrap();
    let z = lp_semigroup_apply(&sys, &f, 1.0).unwrap();
    assert!((&z - &f.scale(c((-1.0f64).exp(), 0.0))).norm() / f.norm() < 1e-10);
    // S·g with g ∈ H²₊ is orthogonal to the resonance subspace
    let g = make_reproducing(c(0.4, -1.2), &one(), 256).unwrap();
    let sg = sys.apply_s(&g).unwrap();
    assert!(lp_semigroup_apply(&sys, &sg, 0.7).unwrap().norm() < 1e-12);
    let r = resonance_apply(&sys, &f).unwrap();
    assert!((&lp_semigroup_apply(&sys, &f, 0.0).unwrap() - &r).norm() < 1e-14);
}

#[test]
fn sufficiency_hypothesis_cases() {
    let sys = inner_at_i();
    let ok = prop9_sufficiency_check(&sys, -I, &one()).unwrap();
    assert!(ok.hypothesis_holds && ok.survival.survives && ok.consistent);
    assert!(ok.paley_wiener.iter().all(|r| r.within));
    // continuation (z+i)/((z-i)(z+2i)) keeps its pole at ζ = -2i
    let bad = prop9_sufficiency_check(&sys, c(0.0, -2.0), &one()).unwrap();
    assert!(!bad.hypothesis_holds);
    let uncancelled: Vec<_> = bad.pole_probes.iter().filter(|p| !p.cancelled).collect();
    assert_eq!(uncancelled.len(), 1);
    assert!((uncancelled[0].location - c(0.0, -2.0)).norm() < 1e-12);
}

// -------------------------------------------------------------- properties

fn coeff_strategy(dim: usize, trunc: usize) -> impl Strategy<Value = SpectralFunction> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * trunc * dim).prop_map(move |v| {
        let coeffs = v.into_iter().map(|(a, b)| c(a, b)).collect();
        SpectralFunction::from_coeffs(dim, trunc, coeffs).unwrap()
    })
}

fn lower_point() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, 0.3f64..3.0).prop_map(|(re, im)| c(re, -im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projections_are_complementary_orthogonal_idempotents(
        f in coeff_strategy(2, 16),
        g in coeff_strategy(2, 16),
    ) {
        let p = f.hardy_project(HardySign::Plus);
        let m = f.hardy_project(HardySign::Minus);
        prop_assert_eq!(&p.hardy_project(HardySign::Plus), &p);
        prop_assert!(p.hardy_project(HardySign::Minus).is_zero());
        prop_assert_eq!(&(&p + &m), &f);
        let lhs = p.inner(&g);
        let rhs = f.inner(&g.hardy_project(HardySign::Plus));
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }

    #[test]
    fn synthesize_analyze_round_trip(f in coeff_strategy(1, 32)) {
        let grid = SamplingGrid::for_truncation(32, 4).unwrap();
        let back = analyze(&synthesize(&f, &grid).unwrap(), &grid, 32).unwrap();
        prop_assert!((&back - &f).norm() <= 1e-12 * f.norm().max(1.0));
    }

    #[test]
    fn survival_residual_is_pole_ratio(zeta in lower_point()) {
        let sys = inner_at_i();
        let v = survival_test(&sys, zeta, &one()).unwrap();
        let expect = (zeta + I).norm() / (zeta - I).norm();
        prop_assert!((v.residual - expect).abs() < 1e-9, "{} vs {}", v.residual, expect);
    }

    #[test]
    fn kernel_modulus_decays_exponentially(zeta in lower_point(), t in 0.0f64..3.0) {
        let f = make_reproducing(zeta, &one(), 512).unwrap();
        let ratio = characteristic_apply(&f, t).unwrap().norm() / f.norm();
        prop_assert!((ratio - (t * zeta.im).exp()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scattering_preserves_norm(
        mu in (-2.0f64..2.0, 0.3f64..2.0),
        seed in 0u64..1000,
        anti in any::<bool>(),
    ) {
        let o = if anti { Orientation::AntiInner } else { Orientation::Inner };
        let s = ScatteringMatrix::scalar_product(&[(c(mu.0, mu.1), o)]).unwrap();
        let grid = SamplingGrid::for_truncation(256, 4).unwrap();
        let f = random_probes(seed, 1, 1, None, &ProbeEnvelope::default())[0].realize(256);
        let sf = apply_scattering(&s, &f, &grid).unwrap();
        prop_assert!((sf.norm() - f.norm()).abs() <= 1e-10 * f.norm());
    }

    #[test]
    fn reference_evolution_is_unitary_with_group_law(seed in 0u64..1000) {
        let f = smooth_probes(seed, 1, 1, 5)[0].realize(512);
        let e1 = reference_evolve(&f, 1.0).unwrap();
        prop_assert!((e1.norm() - f.norm()).abs() <= 1e-8 * f.norm());
        let a = reference_evolve(&reference_evolve(&f, 0.3).unwrap(), 0.7).unwrap();
        prop_assert!((&a - &e1).norm() <= 1e-7 * f.norm());
        prop_assert_eq!(&reference_evolve(&f, 0.0).unwrap(), &f);
    }

    #[test]
    fn characteristic_adjoint_duality(seed in 0u64..1000, t in 0.0f64..2.0) {
        let ps = smooth_probes(seed, 2, 1, 5);
        let (f, g) = (ps[0].realize(512), ps[1].realize(512));
        let lhs = characteristic_apply(&f, t).unwrap().inner(&g);
        let back = characteristic_adjoint_apply(&g, t).unwrap();
        let rhs = f.inner(&back.function);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * f.norm() * g.norm());
        prop_assert!((back.function.norm() - g.norm()).abs() <= 1e-8 * g.norm());
    }
}
