//! The Lax–Phillips system in the outgoing spectral representation.
//!
//! There the outgoing subspace is `D₊ = H²₋` (projection `Q₋`) and the
//! incoming subspace is `D₋ = S H²₊` (projection `S Q₊ S*`). The canonical
//! identification is `Ĵ = Q₋ + S Q₊`, with `Ĵ* = Q₋ + Q₊ S*` and
//!
//! ```text
//! Ĵ*Ĵ - 1 = Q₊S*Q₋ + Q₋SQ₊,        ĴĴ* = Q₋ + SQ₊S*.
//! ```

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{HardySign, SamplingGrid, SpectralFunction};
use crate::scattering::{
    adjoint_scattering, KMatrix, LaurentSymbol, ScatteringMatrix, SymbolSamples,
};
use crate::semigroups::reference_evolve_raw;
use crate::tolerances::Tolerances;

use HardySign::{Minus, Plus};

/// Oversampling of the circle used for dense Laurent sections.
pub const LAURENT_OVERSAMPLING: usize = 8;

#[derive(Clone, Debug)]
pub struct LPSystem {
    s: ScatteringMatrix,
    s_adj: ScatteringMatrix,
    trunc: usize,
    symbol: SymbolSamples,
    symbol_adj: SymbolSamples,
    tol: Tolerances,
}

impl LPSystem {
    pub fn new(s: ScatteringMatrix, trunc: usize, grid_factor: usize) -> Result<Self> {
        let grid = SamplingGrid::for_truncation(trunc, grid_factor)?;
        let s_adj = adjoint_scattering(&s);
        let symbol = SymbolSamples::new(&s, &grid)?;
        let symbol_adj = SymbolSamples::new(&s_adj, &grid)?;
        Ok(Self {
            s,
            s_adj,
            trunc,
            symbol,
            symbol_adj,
            tol: Tolerances::default(),
        })
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn scattering(&self) -> &ScatteringMatrix {
        &self.s
    }

    pub fn scattering_adjoint(&self) -> &ScatteringMatrix {
        &self.s_adj
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn grid(&self) -> &SamplingGrid {
        self.symbol.grid()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn check(&self, f: &SpectralFunction) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        if f.trunc() != self.trunc {
            return Err(Error::LengthMismatch {
                expected: self.trunc,
                found: f.trunc(),
            });
        }
        Ok(())
    }

    /// `S f`, leak-checked.
    pub fn apply_s(&self, f: &SpectralFunction) -> Result<SpectralFunction> {
        self.check(f)?;
        self.symbol.apply(f, self.tol.leak)
    }

    /// `S* f`, leak-checked.
    pub fn apply_s_adj(&self, f: &SpectralFunction) -> Result<SpectralFunction> {
        self.check(f)?;
        self.symbol_adj.apply(f, self.tol.leak)
    }

    /// `S f` and the norm that left the window.
    pub fn apply_s_raw(&self, f: &SpectralFunction) -> Result<(SpectralFunction, f64)> {
        self.check(f)?;
        let a = self.symbol.apply_raw(f)?;
        Ok((a.function, a.discarded))
    }

    pub fn apply_s_adj_raw(&self, f: &SpectralFunction) -> Result<(SpectralFunction, f64)> {
        self.check(f)?;
        let a = self.symbol_adj.apply_raw(f)?;
        Ok((a.function, a.discarded))
    }

    /// Outgoing projection `Q₋`.
    pub fn d_plus(&self, f: &SpectralFunction) -> SpectralFunction {
        f.hardy_project(Minus)
    }

    /// Incoming projection `S Q₊ S*`.
    pub fn d_minus(&self, f: &SpectralFunction) -> Result<SpectralFunction> {
        self.apply_s(&self.apply_s_adj(f)?.hardy_project(Plus))
    }

    /// Dense Laurent section of multiplication by `S` on the `2N·dim` window.
    pub fn dense_multiplier(&self) -> Result<KMatrix> {
        Ok(LaurentSymbol::new(&self.s, self.trunc, LAURENT_OVERSAMPLING)?.section())
    }
}

/// `Ĵ f = Q₋ f + S Q₊ f`.
pub fn identification_apply(sys: &LPSystem, f: &SpectralFunction) -> Result<SpectralFunction> {
    let mut out = sys.apply_s(&f.hardy_project(Plus))?;
    out.axpy(Complex64::new(1.0, 0.0), &f.hardy_project(Minus));
    Ok(out)
}

/// `Ĵ* f = Q₋ f + Q₊ S* f`.
pub fn identification_adjoint_apply(
    sys: &LPSystem,
    f: &SpectralFunction,
) -> Result<SpectralFunction> {
    let mut out = sys.apply_s_adj(f)?.hardy_project(Plus);
    out.axpy(Complex64::new(1.0, 0.0), &f.hardy_project(Minus));
    Ok(out)
}

/// `(Ĵ*Ĵ - 1) f = Q₊S*Q₋ f + Q₋SQ₊ f`.
pub fn gram_defect(sys: &LPSystem, f: &SpectralFunction) -> Result<SpectralFunction> {
    let mut out = sys
        .apply_s_adj(&f.hardy_project(Minus))?
        .hardy_project(Plus);
    out.axpy(
        Complex64::new(1.0, 0.0),
        &sys.apply_s(&f.hardy_project(Plus))?.hardy_project(Minus),
    );
    Ok(out)
}

/// [`gram_defect`] without leak checks, plus the combined discarded norm.
pub fn gram_defect_raw(sys: &LPSystem, f: &SpectralFunction) -> Result<(SpectralFunction, f64)> {
    let (a, la) = sys.apply_s_adj_raw(&f.hardy_project(Minus))?;
    let (b, lb) = sys.apply_s_raw(&f.hardy_project(Plus))?;
    let mut out = a.hardy_project(Plus);
    out.axpy(Complex64::new(1.0, 0.0), &b.hardy_project(Minus));
    Ok((out, la.hypot(lb)))
}

fn max_relative<F>(probes: &[SpectralFunction], op: F) -> Result<(f64, usize)>
where
    F: Fn(&SpectralFunction) -> Result<f64> + Sync,
{
    let vals: Vec<f64> = probes
        .par_iter()
        .map(|p| {
            let n = p.norm();
            if n == 0.0 {
                Ok(0.0)
            } else {
                op(p).map(|r| r / n)
            }
        })
        .collect::<Result<_>>()?;
    Ok(vals.iter().enumerate().fold(
        (0.0, 0),
        |(m, i), (j, &v)| if v > m { (v, j) } else { (m, i) },
    ))
}

/// Largest `‖(ĴĴ* - Q₋ - SQ₊S*) f‖/‖f‖` over the probes.
pub fn projection_identity_residual(sys: &LPSystem, probes: &[SpectralFunction]) -> Result<f64> {
    Ok(max_relative(probes, |f| {
        let lhs = identification_apply(sys, &identification_adjoint_apply(sys, f)?)?;
        let mut rhs = sys.d_minus(f)?;
        rhs.axpy(Complex64::new(1.0, 0.0), &f.hardy_project(Minus));
        Ok((&lhs - &rhs).norm())
    })?
    .0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutationVerdict {
    Commuting,
    NonCommuting,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationReport {
    pub residual: f64,
    /// Index of the probe attaining the residual.
    pub worst_probe: usize,
    pub verdict: CommutationVerdict,
}

/// Largest `‖(D₊D₋ - D₋D₊) f‖/‖f‖` and the probe attaining it.
pub fn commutation_residual(sys: &LPSystem, probes: &[SpectralFunction]) -> Result<(f64, usize)> {
    max_relative(probes, |f| {
        let a = sys.d_plus(&sys.d_minus(f)?);
        let b = sys.d_minus(&sys.d_plus(f))?;
        Ok((&a - &b).norm())
    })
}

/// Classifies `D₊D₋ = D₋D₊`; residuals between the two thresholds are an error.
pub fn check_commutation(sys: &LPSystem, probes: &[SpectralFunction]) -> Result<CommutationReport> {
    let (residual, worst_probe) = commutation_residual(sys, probes)?;
    let verdict = if residual <= sys.tol.commuting {
        CommutationVerdict::Commuting
    } else if residual >= sys.tol.non_commuting {
        CommutationVerdict::NonCommuting
    } else {
        return Err(Error::InconclusiveCommutation { residual });
    };
    Ok(CommutationReport {
        residual,
        worst_probe,
        verdict,
    })
}

/// Frobenius-norm residuals of the dense projection algebra.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AlgebraResiduals {
    pub e_idempotent: f64,
    pub f_idempotent: f64,
    pub e_hermitian: f64,
    pub f_hermitian: f64,
    pub ef: f64,
    pub p_idempotent: f64,
    /// `max_λ dist(λ, {-1, 0, 1})` over the eigenvalues of `V`.
    pub spectrum: f64,
    pub aaa: f64,
    /// `B² - B` for `B = Q₊S*Q₋S`.
    pub b_idempotent: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        [
            self.e_idempotent,
            self.f_idempotent,
            self.e_hermitian,
            self.f_hermitian,
            self.ef,
            self.p_idempotent,
            self.spectrum,
            self.aaa,
            self.b_idempotent,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `A = Q₊S*Q₋`, `V = A + A*`, `P = V²`, `E = (P + V)/2`, `F = (P - V)/2`.
///
/// Everything is carried by the Hankel block `K = Q₊S*Q₋ : H²₋ → H²₊`. In the
/// `(H²₋, H²₊)` splitting `V = [[0, K*], [K, 0]]` and `P = diag(K*K, KK*)`, so
/// the residuals reduce to products of half-size blocks.
#[derive(Clone, Debug)]
pub struct ProjectionAlgebra {
    pub k: KMatrix,
    pub rank_e: usize,
    pub rank_f: usize,
    /// Eigenvalues of `V` away from 0, ascending.
    pub nonzero_spectrum: Vec<f64>,
    pub residuals: AlgebraResiduals,
}

impl ProjectionAlgebra {
    fn assemble(&self, diag: Complex64, off: Complex64) -> KMatrix {
        let h = self.k.nrows();
        let g = self.k.adjoint() * &self.k;
        let p = &self.k * self.k.adjoint();
        Mat::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
            (true, true) => diag * g[(i, j)],
            (false, false) => diag * p[(i - h, j - h)],
            (false, true) => off * self.k[(i - h, j)],
            (true, false) => off * self.k[(j - h, i)].conj(),
        })
    }

    /// `V` on the full window, `H²₋` coordinates first.
    pub fn v(&self) -> KMatrix {
        self.assemble(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn e(&self) -> KMatrix {
        self.assemble(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))
    }

    pub fn f(&self) -> KMatrix {
        self.assemble(Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0))
    }
}

fn fro(m: &KMatrix) -> f64 {
    m.norm_l2()
}

fn block(m: &KMatrix, rows: HardySign, cols: HardySign, half: usize) -> KMatrix {
    let r0 = if rows == Plus { half } else { 0 };
    let c0 = if cols == Plus { half } else { 0 };
    m.as_ref().submatrix(r0, c0, half, half).to_owned()
}

/// Dense projection algebra; requires a commuting verdict.
pub fn theorem1_decompose(
    sys: &LPSystem,
    commutation: &CommutationReport,
) -> Result<ProjectionAlgebra> {
    if commutation.verdict != CommutationVerdict::Commuting {
        return Err(Error::domain(format!(
            "projection algebra needs commuting D+/D- (residual {:.3e})",
            commutation.residual
        )));
    }
    let half = sys.trunc * sys.dim();
    let m = sys.dense_multiplier()?;
    // Q₊S*Q₋ is the adjoint of the (−, +) block of S
    let k = block(&m, Minus, Plus, half).adjoint().to_owned();
    let g = k.adjoint() * &k;
    let h = &k * k.adjoint();
    let g2 = &g * &g;
    let h2 = &h * &h;
    let kg = &k * &g;
    let hk = &h * &k;
    let gk_adj = &g * k.adjoint();
    let k_adj_h = k.adjoint() * &h;

    let diag = fro(&(&g2 - &g)).hypot(fro(&(&h2 - &h)));
    let e_off = fro(&(&gk_adj + &k_adj_h - k.adjoint() * faer::Scale(Complex64::new(2.0, 0.0))))
        .hypot(fro(
            &(&kg + &hk - &k * faer::Scale(Complex64::new(2.0, 0.0)))
        ));
    let f_off = e_off;
    let herm = fro(&(&g - g.adjoint())).hypot(fro(&(&h - h.adjoint())));
    let ef_off = fro(&(&k_adj_h - &gk_adj)).hypot(fro(&(&kg - &hk)));

    let sv = k
        .singular_values()
        .map_err(|e| Error::LinearAlgebra(format!("{e:?}")))?;
    let spectrum = sv
        .iter()
        .map(|&s| s.abs().min((s - 1.0).abs()))
        .fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 0.5).count();
    let mut nonzero_spectrum: Vec<f64> = sv
        .iter()
        .filter(|&&s| s > 0.5)
        .flat_map(|&s| [-s, s])
        .collect();
    nonzero_spectrum.sort_by(f64::total_cmp);

    let residuals = AlgebraResiduals {
        e_idempotent: 0.25 * diag.hypot(e_off),
        f_idempotent: 0.25 * diag.hypot(f_off),
        e_hermitian: 0.5 * herm,
        f_hermitian: 0.5 * herm,
        ef: 0.25 * diag.hypot(ef_off),
        p_idempotent: diag,
        spectrum,
        aaa: fro(&(&hk - &k)),
        // B = Q₊S*Q₋SQ₊ = KK* on H²₊
        b_idempotent: fro(&(&h2 - &h)),
    };
    let trace: f64 = (0..half).map(|i| 0.5 * (g[(i, i)].re + h[(i, i)].re)).sum();
    if residuals.max() > sys.tol.projector || (trace - rank as f64).abs() > 0.5 {
        return Err(Error::Discretization(format!(
            "projection algebra off tolerance {:.1e}: {residuals:?}, trace E = trace F = {trace:.6}",
            sys.tol.projector
        )));
    }
    Ok(ProjectionAlgebra {
        k,
        rank_e: rank,
        rank_f: rank,
        nonzero_spectrum,
        residuals,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub t: f64,
    /// `‖(Ĵ*Ĵ - 1) e^{-itλ} f‖`.
    pub norm: f64,
    /// Norm that left the window while evolving and multiplying.
    pub discarded: f64,
}

/// `t ↦ ‖(Ĵ*Ĵ - 1) e^{-itλ} f‖`.
///
/// The defect only sees the evolved function through a few coefficients
/// near the center of the window, so the slowly decaying tail that a
/// simple-pole `f` develops under evolution is cut without a leak error and
/// reported in `discarded` instead.
pub fn asymptotic_equivalence_profile(
    sys: &LPSystem,
    f: &SpectralFunction,
    times: &[f64],
) -> Result<Vec<ProfilePoint>> {
    times
        .par_iter()
        .map(|&t| {
            let ev = reference_evolve_raw(f, t)?;
            let (g, leak) = gram_defect_raw(sys, &ev.function)?;
            Ok(ProfilePoint {
                t,
                norm: g.norm(),
                discarded: ev.discarded.hypot(leak),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    /// `‖(Ĵ*Ĵ - 1) f‖/‖f‖`.
    pub gram: f64,
    /// `‖D₊D₋ f‖/‖f‖`.
    pub orthogonality: f64,
    /// `‖Q₋SQ₊ f‖/‖f‖`.
    pub hankel: f64,
    pub isometric: bool,
}

/// The three equivalent isometry conditions, which must agree.
pub fn check_isometry_equivalences(
    sys: &LPSystem,
    probes: &[SpectralFunction],
) -> Result<IsometryReport> {
    let (gram, _) = max_relative(probes, |f| Ok(gram_defect(sys, f)?.norm()))?;
    let (orthogonality, _) = max_relative(probes, |f| Ok(sys.d_plus(&sys.d_minus(f)?).norm()))?;
    let (hankel, _) = max_relative(probes, |f| {
        Ok(sys
            .apply_s(&f.hardy_project(Plus))?
            .hardy_project(Minus)
            .norm())
    })?;
    let small = sys.tol.commuting;
    let flags = [gram <= small, orthogonality <= small, hankel <= small];
    if flags.iter().any(|&x| x != flags[0]) {
        return Err(Error::MixedEquivalence {
            gram,
            orthogonality,
            hankel,
        });
    }
    Ok(IsometryReport {
        gram,
        orthogonality,
        hankel,
        isometric: flags[0],
    })
}
