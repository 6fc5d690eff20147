//! The generalized Lax–Phillips semigroup `Z₊(t) = T₊(t) · S Q₋ S*`, its
//! resonance subspace `H²₊ ⊖ S H²₊`, eigenvector survival and the
//! pole–resonance correspondence.

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{HardySign, SpectralFunction};
use crate::lp_system::{CommutationReport, CommutationVerdict, LPSystem};
use crate::quadrature::{l2_norm_sqr_oracle, OracleConfig};
use crate::scattering::{eval_scattering, frobenius, mat_vec, pole_set, KMatrix};
use crate::semigroups::{characteristic_apply, EvolutionTime, ReproducingVector};

use HardySign::{Minus, Plus};

/// Times at which surviving eigenvectors are checked against `e^{-itζ}`.
pub const EIGEN_TIMES: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// Below this fraction of `‖f‖`, `‖Rf‖` is treated as zero when normalizing.
const RESONANCE_FLOOR: f64 = 1e-8;

/// `(S Q₋ S*) f`.
fn incoming_complement(sys: &LPSystem, f: &SpectralFunction) -> Result<SpectralFunction> {
    sys.apply_s(&sys.apply_s_adj(f)?.hardy_project(Minus))
}

/// `R f = Q₊ S Q₋ S* f`.
pub fn resonance_apply(sys: &LPSystem, f: &SpectralFunction) -> Result<SpectralFunction> {
    Ok(incoming_complement(sys, f)?.hardy_project(Plus))
}

/// `Z₊(t) f = T₊(t) S Q₋ S* f`, `t ≥ 0`.
pub fn lp_semigroup_apply(
    sys: &LPSystem,
    f: &SpectralFunction,
    t: f64,
) -> Result<SpectralFunction> {
    let t = EvolutionTime::forward(t)?.value();
    characteristic_apply(&incoming_complement(sys, f)?, t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupCheck {
    pub t1: f64,
    pub t2: f64,
    /// `max ‖Z(t₁)Z(t₂)f - Z(t₁+t₂)f‖ / ‖Rf‖` over probes.
    pub residual: f64,
    /// Same defect relative to `‖f‖`.
    pub residual_vs_input: f64,
    pub worst_probe: usize,
}

/// Semigroup-law defect on probes.
///
/// `Z₊(t)` only sees `f` through `Rf = Z₊(0)f`, so the defect is measured
/// against `‖Rf‖`; when `‖Rf‖` is below `1e-8‖f‖` the input norm is used
/// instead. The defect relative to `‖f‖` is reported alongside.
pub fn semigroup_defect(
    sys: &LPSystem,
    probes: &[SpectralFunction],
    t1: f64,
    t2: f64,
) -> Result<SemigroupCheck> {
    EvolutionTime::forward(t1)?;
    EvolutionTime::forward(t2)?;
    let rows: Vec<(f64, f64)> = probes
        .par_iter()
        .map(|f| {
            let fnorm = f.norm();
            if fnorm == 0.0 {
                return Ok((0.0, 0.0));
            }
            let lhs = lp_semigroup_apply(sys, &lp_semigroup_apply(sys, f, t2)?, t1)?;
            let rhs = lp_semigroup_apply(sys, f, t1 + t2)?;
            let d = (&lhs - &rhs).norm();
            let r = resonance_apply(sys, f)?.norm().max(RESONANCE_FLOOR * fnorm);
            Ok((d / r, d / fnorm))
        })
        .collect::<Result<_>>()?;
    let (mut residual, mut residual_vs_input, mut worst_probe) = (0.0, 0.0, 0);
    for (i, (r, v)) in rows.into_iter().enumerate() {
        if r > residual {
            residual = r;
            worst_probe = i;
        }
        residual_vs_input = f64::max(residual_vs_input, v);
    }
    Ok(SemigroupCheck {
        t1,
        t2,
        residual,
        residual_vs_input,
        worst_probe,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemigroupVerdict {
    Holds,
    Violated,
}

/// Classifies the semigroup law with the commutation thresholds.
pub fn verify_semigroup_property(
    sys: &LPSystem,
    probes: &[SpectralFunction],
    t1: f64,
    t2: f64,
) -> Result<(SemigroupCheck, SemigroupVerdict)> {
    let check = semigroup_defect(sys, probes, t1, t2)?;
    let tol = sys.tolerances();
    let verdict = if check.residual <= tol.semigroup {
        SemigroupVerdict::Holds
    } else if check.residual >= tol.non_commuting {
        SemigroupVerdict::Violated
    } else {
        return Err(Error::InconclusiveCommutation {
            residual: check.residual,
        });
    };
    Ok((check, verdict))
}

/// `range(R)` for a commuting system.
#[derive(Clone, Debug)]
pub struct ResonanceSubspace {
    pub rank: usize,
    /// Orthonormal basis of `range(R)`, all in `H²₊`.
    pub basis: Vec<SpectralFunction>,
    /// Eigenvalues of `R` restricted to `H²₊`, descending, above `1e-3`.
    pub spectrum: Vec<f64>,
    /// `‖R² - R‖_F`.
    pub idempotent: f64,
    /// `‖R - R*‖_F`, i.e. the `H²₊ ← H²₋` block.
    pub hermitian: f64,
    /// `max ‖Q₊S* b‖` over basis vectors: orthogonality to `S H²₊`.
    pub orthogonality: f64,
}

fn column_block(m: &KMatrix, rows: HardySign, cols: HardySign, half: usize) -> KMatrix {
    let r0 = if rows == Plus { half } else { 0 };
    let c0 = if cols == Plus { half } else { 0 };
    m.as_ref().submatrix(r0, c0, half, half).to_owned()
}

/// Densifies `R = Q₊ S Q₋ S*` and extracts its range.
///
/// With `K = Q₊ S Q₋` as an `N·dim` square block, `R` on `H²₊` is `K K*`
/// and its `H²₊ ← H²₋` block is `K (Q₋SQ₋)*`.
pub fn resonance_projector(
    sys: &LPSystem,
    commutation: &CommutationReport,
) -> Result<ResonanceSubspace> {
    if commutation.verdict != CommutationVerdict::Commuting {
        return Err(Error::NotProjection {
            residual: commutation.residual,
        });
    }
    let half = sys.trunc() * sys.dim();
    let m = sys.dense_multiplier()?;
    let k = column_block(&m, Plus, Minus, half);
    let k_mm = column_block(&m, Minus, Minus, half);
    let r_pp = &k * k.adjoint();
    let r_pm = &k * k_mm.adjoint();
    let idem_pp = frobenius(&(&r_pp * &r_pp - &r_pp));
    let idem_pm = frobenius(&(&r_pp * &r_pm - &r_pm));
    let idempotent = idem_pp.hypot(idem_pm);
    let hermitian = frobenius(&r_pm) + frobenius(&(&r_pp - r_pp.adjoint()));
    let tol = sys.tolerances();
    if idempotent > tol.projector || hermitian > tol.projector {
        return Err(Error::NotProjection {
            residual: idempotent.max(hermitian),
        });
    }
    let eig = r_pp
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let vals = eig.S().column_vector();
    let vecs = eig.U();
    let mut spectrum = vec![];
    let mut basis = vec![];
    for j in (0..half).rev() {
        let v = vals[j].re;
        if v > 1e-3 {
            spectrum.push(v);
        }
        if v > tol.rank {
            let mut f = SpectralFunction::zeros(sys.dim(), sys.trunc());
            for (i, c) in f.half_mut(Plus).iter_mut().enumerate() {
                *c = vecs[(i, j)];
            }
            basis.push(f);
        }
    }
    let orthogonality = basis
        .iter()
        .map(|b| sys.apply_s_adj(b).map(|g| g.hardy_norm(Plus)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(ResonanceSubspace {
        rank: basis.len(),
        basis,
        spectrum,
        idempotent,
        hermitian,
        orthogonality,
    })
}

/// One sampled inequality evaluation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundChecks {
    pub points: usize,
    /// `‖(S*f)(z)‖ ≤ ‖k‖/|Im ζ|`.
    pub uniform_violations: usize,
    /// `‖(S*f)(z)‖ ≤ ‖k‖/|z - ζ|`.
    pub distance_violations: usize,
    /// Largest ratio of the left side to the distance bound.
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalVerdict {
    pub zeta: Complex64,
    pub k: Vec<Complex64>,
    /// `‖Q₊ S* f_{ζ,k}‖ / ‖f_{ζ,k}‖`.
    pub residual: f64,
    pub survives: bool,
    /// `None` when `S` has no rational continuation.
    pub bound_checks: Option<BoundChecks>,
}

/// Points of the lower half-plane used for the pointwise bound checks: a log grid
/// in `|Im z| ∈ [0.05, 10]` across `Re ζ ± 4`, minus small disks around `ζ`
/// and the given poles.
pub fn lower_half_plane_grid(zeta: Complex64, poles: &[Complex64]) -> Vec<Complex64> {
    const RADIUS: f64 = 0.05;
    let ims: Vec<f64> = (0..15)
        .map(|j| 0.05 * (10.0f64 / 0.05).powf(j as f64 / 14.0))
        .collect();
    let mut pts = vec![];
    for im in ims {
        for r in 0..17 {
            let z = Complex64::new(zeta.re - 4.0 + 0.5 * r as f64, -im);
            let near = (z - zeta).norm() < RADIUS || poles.iter().any(|p| (z - p).norm() < RADIUS);
            if !near {
                pts.push(z);
            }
        }
    }
    pts
}

/// The continuation `z ↦ S(z̄)* k / (z - ζ)` of `S* f_{ζ,k}`.
fn continued(sys: &LPSystem, v: &ReproducingVector, z: Complex64) -> Result<Vec<Complex64>> {
    let m = eval_scattering(sys.scattering_adjoint(), z)?;
    let s = 1.0 / (z - v.zeta);
    Ok(mat_vec(&m, &v.k).into_iter().map(|c| c * s).collect())
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn bound_checks(sys: &LPSystem, v: &ReproducingVector) -> Result<BoundChecks> {
    let poles = sys.scattering_adjoint().singularities();
    let pts = lower_half_plane_grid(v.zeta, &poles);
    let kn = v.k_norm();
    let slack = 1.0 + 1e-9;
    let mut out = BoundChecks {
        points: pts.len(),
        ..BoundChecks::default()
    };
    for z in pts {
        let val = vec_norm(&continued(sys, v, z)?);
        if val > slack * kn / v.zeta.im.abs() {
            out.uniform_violations += 1;
        }
        let b24 = kn / (z - v.zeta).norm();
        if val > slack * b24 {
            out.distance_violations += 1;
        }
        out.worst_ratio = out.worst_ratio.max(val / b24);
    }
    Ok(out)
}

/// Does `f_{ζ,k}` lie in `H²₊ ⊖ S H²₊`, i.e. is `S* f_{ζ,k} ∈ H²₋`?
pub fn survival_test(sys: &LPSystem, zeta: Complex64, k: &[Complex64]) -> Result<SurvivalVerdict> {
    let v = ReproducingVector::new(zeta, k.to_vec())?;
    if v.dim() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: v.dim(),
        });
    }
    if let Some(&location) = sys
        .scattering_adjoint()
        .singularities()
        .iter()
        .find(|p| (**p - zeta).norm() < 1e-12)
    {
        return Err(Error::Pole { location });
    }
    let f = v.realize(sys.trunc());
    let g = sys.apply_s_adj(&f)?;
    let residual = g.hardy_norm(Plus) / f.norm();
    let bound_checks = if sys.scattering().is_rational() {
        Some(bound_checks(sys, &v)?)
    } else {
        None
    };
    Ok(SurvivalVerdict {
        zeta,
        k: k.to_vec(),
        residual,
        survives: residual <= sys.tolerances().survival,
        bound_checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub zeta: Complex64,
    pub multiplicity: usize,
    /// Orthonormal directions `k` with `S(ζ̄)* k = 0`.
    pub directions: Vec<Vec<Complex64>>,
    pub survival_residual: f64,
    /// `max_t ‖Z₊(t) f - e^{-itζ} f‖/‖f‖` over directions and [`EIGEN_TIMES`].
    pub eigen_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleCorrespondence {
    pub resonances: Vec<ResonanceRow>,
    pub total_multiplicity: usize,
    pub resonance_rank: usize,
    pub consistent: bool,
}

/// Orthonormal `k` with `S(ζ̄)* k = 0`: the surviving directions at `ζ`.
pub fn resonance_directions(sys: &LPSystem, zeta: Complex64) -> Result<Vec<Vec<Complex64>>> {
    let s = eval_scattering(sys.scattering(), zeta.conj())?;
    let sa: KMatrix = s.adjoint().to_owned();
    let svd = sa
        .svd()
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let sv = svd.S().column_vector();
    let v = svd.V();
    let d = sys.dim();
    Ok((0..d)
        .filter(|&j| sv[j].re < 1e-8)
        .map(|j| (0..d).map(|i| v[(i, j)]).collect())
        .collect())
}

fn eigen_residual(sys: &LPSystem, v: &ReproducingVector) -> Result<f64> {
    let f = v.realize(sys.trunc());
    let mut worst: f64 = 0.0;
    for t in EIGEN_TIMES {
        let z = lp_semigroup_apply(sys, &f, t)?;
        let expect = f.scale((-Complex64::i() * t * v.zeta).exp());
        worst = worst.max((&z - &expect).norm() / f.norm());
    }
    Ok(worst)
}

/// For inner-only rational `S`: every ℂ₋ pole carries surviving eigenvectors
/// whose count matches its rank, and the ranks add up to `rank R`.
pub fn pole_correspondence(
    sys: &LPSystem,
    commutation: &CommutationReport,
) -> Result<PoleCorrespondence> {
    if !sys.scattering().is_inner() {
        return Err(Error::Unsupported(
            "pole correspondence is only asserted for inner rational scattering matrices".into(),
        ));
    }
    pole_correspondence_with(sys, &resonance_projector(sys, commutation)?)
}

/// [`pole_correspondence`] against an already computed resonance subspace.
pub fn pole_correspondence_with(
    sys: &LPSystem,
    subspace: &ResonanceSubspace,
) -> Result<PoleCorrespondence> {
    if !sys.scattering().is_inner() {
        return Err(Error::Unsupported(
            "pole correspondence is only asserted for inner rational scattering matrices".into(),
        ));
    }
    let poles = pole_set(sys.scattering())?;
    let mut rows = vec![];
    for (zeta, mult) in poles.lower {
        let directions = resonance_directions(sys, zeta)?;
        let mut survival_residual: f64 = 0.0;
        let mut eig: f64 = 0.0;
        for k in &directions {
            let s = survival_test(sys, zeta, k)?;
            survival_residual = survival_residual.max(s.residual);
            eig = eig.max(eigen_residual(
                sys,
                &ReproducingVector::new(zeta, k.clone())?,
            )?);
        }
        rows.push(ResonanceRow {
            zeta,
            multiplicity: mult,
            directions,
            survival_residual,
            eigen_residual: eig,
        });
    }
    let total: usize = rows.iter().map(|r| r.multiplicity).sum();
    let tol = sys.tolerances();
    let consistent = total == subspace.rank
        && rows.iter().all(|r| {
            r.directions.len() == r.multiplicity
                && r.survival_residual <= tol.survival
                && r.eigen_residual <= tol.eigen
        });
    Ok(PoleCorrespondence {
        resonances: rows,
        total_multiplicity: total,
        resonance_rank: subspace.rank,
        consistent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleProbe {
    pub location: Complex64,
    /// `δ‖v(p + δ)‖` at `δ = 1e-4` and `1e-6`; equal for a simple pole, shrinking when cancelled.
    pub residue_estimates: [f64; 2],
    pub cancelled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaleyWienerRow {
    pub y: f64,
    /// `∫ ‖(S* f)(x - iy)‖² dx`.
    pub integral: f64,
    pub bound: f64,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficiencyReport {
    pub zeta: Complex64,
    pub hypothesis_holds: bool,
    pub pole_probes: Vec<PoleProbe>,
    /// Half-width of the exclusion square, `|Im ζ|/2`.
    pub epsilon: f64,
    /// Empty when the hypothesis fails.
    pub paley_wiener: Vec<PaleyWienerRow>,
    pub survival: SurvivalVerdict,
    /// Hypothesis implies survival. Vacuous when the hypothesis fails.
    pub consistent: bool,
}

/// Line heights for the Paley–Wiener integrals.
pub const PW_HEIGHTS: [f64; 3] = [0.1, 1.0, 10.0];

/// Checks the continuation hypothesis by probing every candidate ℂ₋ pole of
/// `S* f_{ζ,k}`, then the Paley–Wiener integrals and survival.
///
/// The bound on each line is `π‖k‖²/ε` when the line misses the exclusion
/// square and `‖k‖²(2/ε + 2ε/|Im ζ|²)` when it crosses it.
pub fn prop9_sufficiency_check(
    sys: &LPSystem,
    zeta: Complex64,
    k: &[Complex64],
) -> Result<SufficiencyReport> {
    if !sys.scattering().is_rational() {
        return Err(Error::Unsupported(
            "continuation checks need a rational scattering matrix".into(),
        ));
    }
    let v = ReproducingVector::new(zeta, k.to_vec())?;
    let mut candidates = vec![zeta];
    candidates.extend(
        sys.scattering_adjoint()
            .singularities()
            .into_iter()
            .filter(|p| p.im < 0.0 && (p - zeta).norm() > 1e-12),
    );
    let mut pole_probes = vec![];
    for p in candidates {
        let mut est = [0.0; 2];
        for (slot, delta) in est.iter_mut().zip([1e-4, 1e-6]) {
            // approach from inside ℂ₋ along a diagonal to avoid other singular lines
            let z = p + Complex64::new(delta, -delta) / 2f64.sqrt();
            *slot = delta * vec_norm(&continued(sys, &v, z)?);
        }
        let cancelled = est[1] <= 0.1 * est[0] || est[1] <= 1e-12 * v.k_norm();
        pole_probes.push(PoleProbe {
            location: p,
            residue_estimates: est,
            cancelled,
        });
    }
    let hypothesis_holds = pole_probes.iter().all(|p| p.cancelled);
    let survival = survival_test(sys, zeta, k)?;
    let eps = zeta.im.abs() / 2.0;
    let mut paley_wiener = vec![];
    if hypothesis_holds {
        let k2 = v.k_norm().powi(2);
        let cfg = OracleConfig::default();
        for y in PW_HEIGHTS {
            let integral = l2_norm_sqr_oracle(
                |x| continued(sys, &v, Complex64::new(x, -y)).unwrap_or_default(),
                &cfg,
            )?;
            let crosses = (-y - zeta.im).abs() <= eps;
            let bound = if crosses {
                k2 * (2.0 / eps + 2.0 * eps / zeta.im.powi(2))
            } else {
                k2 * std::f64::consts::PI / eps
            };
            paley_wiener.push(PaleyWienerRow {
                y,
                integral,
                bound,
                within: integral <= bound * (1.0 + 1e-9),
            });
        }
    }
    let consistent = !hypothesis_holds || survival.survives;
    Ok(SufficiencyReport {
        zeta,
        hypothesis_holds,
        pole_probes,
        epsilon: eps,
        paley_wiener,
        survival,
        consistent,
    })
}

/// Dense `R` on `H²₊` as a matrix, for diagnostics.
pub fn resonance_matrix(sys: &LPSystem) -> Result<Mat<Complex64>> {
    let half = sys.trunc() * sys.dim();
    let m = sys.dense_multiplier()?;
    let k = column_block(&m, Plus, Minus, half);
    Ok(&k * k.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_system::check_commutation;
    use crate::probes::{random_probes, realize_all, ProbeEnvelope};
    use crate::scattering::{rank_one_projector, BlaschkeFactor, Orientation, ScatteringMatrix};
    use crate::semigroups::make_reproducing;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn probes(n: usize, dim: usize) -> Vec<SpectralFunction> {
        let env = ProbeEnvelope {
            max_re: 1.0,
            min_im: 0.5,
            ..ProbeEnvelope::default()
        };
        realize_all(&random_probes(9, 6, dim, None, &env), n)
    }

    fn inner(mus: &[Complex64], n: usize) -> LPSystem {
        let z: Vec<_> = mus.iter().map(|&m| (m, Orientation::Inner)).collect();
        LPSystem::new(ScatteringMatrix::scalar_product(&z).unwrap(), n, 4).unwrap()
    }

    #[test]
    fn eigenvector_at_mirrored_zero() {
        let sys = inner(&[c(0.0, 1.0)], 128);
        let f = make_reproducing(c(0.0, -1.0), &[c(1.0, 0.0)], 128).unwrap();
        let z = lp_semigroup_apply(&sys, &f, 1.0).unwrap();
        assert!((&z - &f.scale(c((-1.0f64).exp(), 0.0))).norm() < 1e-10 * f.norm());
        let r = resonance_apply(&sys, &f).unwrap();
        assert!((&r - &f).norm() < 1e-12 * f.norm());
    }

    #[test]
    fn vanishes_on_s_h2_plus() {
        let sys = inner(&[c(0.5, 1.0)], 128);
        let g = make_reproducing(c(0.2, -0.7), &[c(1.0, 0.0)], 128).unwrap();
        let f = sys.apply_s(&g).unwrap();
        assert!(lp_semigroup_apply(&sys, &f, 0.7).unwrap().norm() < 1e-12 * f.norm());
    }

    #[test]
    fn survival_closed_forms() {
        let sys = inner(&[c(0.0, 1.0)], 256);
        let yes = survival_test(&sys, c(0.0, -1.0), &[c(1.0, 0.0)]).unwrap();
        assert!(yes.survives && yes.residual < 1e-12);
        let b = yes.bound_checks.unwrap();
        assert_eq!((b.uniform_violations, b.distance_violations), (0, 0));
        // partial fractions: Q₊S*f_{-2i} = S(2i)* f_{-2i}, |S(2i)| = 1/3
        let no = survival_test(&sys, c(0.0, -2.0), &[c(1.0, 0.0)]).unwrap();
        assert!(!no.survives);
        assert!((no.residual - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn matrix_factor_survival_depends_on_direction() {
        let p = rank_one_projector(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let s = ScatteringMatrix::new(
            KMatrix::identity(2, 2),
            vec![BlaschkeFactor::new(c(0.0, 1.0), p, Orientation::Inner).unwrap()],
            None,
        )
        .unwrap();
        let sys = LPSystem::new(s, 128, 4).unwrap();
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!(survival_test(&sys, c(0.0, -1.0), &e1).unwrap().survives);
        assert!(!survival_test(&sys, c(0.0, -1.0), &e2).unwrap().survives);
    }

    #[test]
    fn resonance_rank_counts_blaschke_degree() {
        let n = 128;
        let ps = probes(n, 1);
        let sys = inner(&[c(1.0, 1.0), c(-1.0, 1.0), c(0.0, 2.0)], n);
        let rep = check_commutation(&sys, &ps).unwrap();
        let sub = resonance_projector(&sys, &rep).unwrap();
        assert_eq!(sub.rank, 3);
        assert!(sub.orthogonality < 1e-8);
        let pc = pole_correspondence(&sys, &rep).unwrap();
        assert!(pc.consistent, "{pc:?}");
    }

    #[test]
    fn constant_unitary_has_no_resonances() {
        let n = 64;
        let s =
            ScatteringMatrix::constant(KMatrix::identity(1, 1) * faer::Scale(c(0.0, 1.0))).unwrap();
        let sys = LPSystem::new(s, n, 4).unwrap();
        let rep = check_commutation(&sys, &probes(n, 1)).unwrap();
        assert_eq!(resonance_projector(&sys, &rep).unwrap().rank, 0);
    }

    #[test]
    fn sufficiency_cases() {
        let sys = inner(&[c(0.0, 1.0)], 256);
        let ok = prop9_sufficiency_check(&sys, c(0.0, -1.0), &[c(1.0, 0.0)]).unwrap();
        assert!(ok.hypothesis_holds && ok.survival.survives && ok.consistent);
        assert!(
            ok.paley_wiener.iter().all(|r| r.within),
            "{:?}",
            ok.paley_wiener
        );
        let bad = prop9_sufficiency_check(&sys, c(0.0, -2.0), &[c(1.0, 0.0)]).unwrap();
        assert!(!bad.hypothesis_holds);
        assert!(!bad.pole_probes[0].cancelled);
        assert!(!bad.survival.survives);
    }

    #[test]
    fn semigroup_law_contrast() {
        let n = 128;
        let ps = probes(n, 1);
        let sys = inner(&[c(0.0, 1.0)], n);
        let (chk, v) = verify_semigroup_property(&sys, &ps, 0.5, 0.7).unwrap();
        assert_eq!(v, SemigroupVerdict::Holds, "{chk:?}");
    }

    #[test]
    fn negative_time_rejected() {
        let sys = inner(&[c(0.0, 1.0)], 16);
        let f = SpectralFunction::zeros(1, 16);
        assert!(lp_semigroup_apply(&sys, &f, -0.5).is_err());
    }
}
