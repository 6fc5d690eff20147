//! The reference evolution `e^{-itλ}`, the characteristic semigroup
//! `T₊(t) = Q₊ e^{-itλ} Q₊` with its adjoint, and the eigenvectors
//! `f_{ζ,k}(λ) = k/(λ - ζ)`.
//!
//! On the circle `e^{itλ} = e^{-t(1+w)/(1-w)} = Σₙ aₙ(t) wⁿ` with
//! `aₙ(t) = e^{-t} Lₙ^{(-1)}(2t)` (generating function of the Laguerre
//! polynomials), all real. Multiplication by `e^{∓itλ}` is therefore a
//! one-sided Toeplitz action on basis coefficients, which is applied
//! exactly rather than through a sampled phase: the phase has an essential
//! singularity at `w = 1` that no grid resolves uniformly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{HardySign, SpectralFunction};
use crate::scattering::check_leak;

/// Default accuracy envelope on `|t|`.
pub const DEFAULT_T_MAX: f64 = 8.0;

/// Default bound on `discarded/‖f‖` for the reference evolution. The norm
/// defect is quadratic in the discarded mass, so this keeps `‖e^{-itλ}f‖`
/// within about `1e-12` relative of `‖f‖`.
pub const DEFAULT_EVOLVE_LEAK_TOLERANCE: f64 = 1e-6;

/// Eigenvectors with poles closer to the axis are rejected unless overridden.
pub const MIN_POLE_DISTANCE: f64 = 0.25;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A finite evolution parameter.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct EvolutionTime(f64);

impl EvolutionTime {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::domain(format!(
                "evolution time must be finite, got {t}"
            )));
        }
        Ok(Self(t))
    }

    /// Semigroup time, `t ≥ 0`.
    pub fn forward(t: f64) -> Result<Self> {
        let s = Self::new(t)?;
        if t < 0.0 {
            return Err(Error::domain(format!(
                "semigroup time must be non-negative, got {t}; use the adjoint for the other direction"
            )));
        }
        Ok(s)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn within(self, t_max: f64) -> Result<Self> {
        if self.0.abs() > t_max {
            return Err(Error::domain(format!(
                "|t| = {} outside the accuracy envelope {t_max}",
                self.0.abs()
            )));
        }
        Ok(self)
    }
}

/// `aₙ(t) = e^{-t} Lₙ^{(-1)}(2t)` for `n < len`, `t ≥ 0`.
pub fn laguerre_symbol(t: f64, len: usize) -> Vec<f64> {
    assert!(t >= 0.0, "symbol defined for t >= 0");
    let x = 2.0 * t;
    let mut out = vec![0.0; len];
    if len == 0 {
        return out;
    }
    let decay = (-t).exp();
    let (mut prev, mut cur) = (1.0, -x);
    out[0] = decay;
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = decay * cur;
        // (n+1) L_{n+1} = (2n + α + 1 - x) Lₙ - (n + α) L_{n-1} with α = -1
        let nf = n as f64;
        let next = ((2.0 * nf - x) * cur - (nf - 1.0) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    out
}

/// An evolved function plus the norm that left the truncation window.
#[derive(Clone, Debug)]
pub struct Evolved {
    pub function: SpectralFunction,
    pub discarded: f64,
}

/// How far past the window the discarded tail is summed explicitly, in units of `N`.
const TAIL_SPAN: usize = 2;

const CANCELLATION_FLOOR: f64 = 1e-6;

/// Norm of the part of an isometric image that fell outside the window.
///
/// `‖f‖² - ‖kept‖²` is exact in exact arithmetic but cancels to a floor near
/// `1e-8‖f‖`; the explicitly summed tail is precise when small but omits
/// anything beyond `TAIL_SPAN·N`. The norm difference is trusted only above
/// its roundoff floor.
fn lost_mass(before: f64, after: &SpectralFunction, explicit_tail_sqr: f64) -> f64 {
    let by_norm = (before * before - after.norm_sqr()).max(0.0).sqrt();
    let explicit = explicit_tail_sqr.sqrt();
    // below this the norm difference is roundoff
    let floor = CANCELLATION_FLOOR * before;
    if by_norm > floor {
        by_norm.max(explicit)
    } else {
        explicit
    }
}

/// Coefficient `j` of `Σₖ aₖ c_{j+s·k}` (`s = +1` or `-1`), for any integer `j`.
fn toeplitz_coeff(f: &SpectralFunction, a: &[f64], j: i64, s: i64, dst: &mut [Complex64]) {
    let (lo, hi) = (-(f.trunc() as i64), f.trunc() as i64);
    // source index m = j + s·k must lie in [lo, hi)
    let (k0, k1) = if s > 0 {
        (lo - j, hi - j)
    } else {
        (j - hi + 1, j - lo + 1)
    };
    let k0 = k0.max(0);
    let k1 = k1.min(a.len() as i64);
    dst.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
    for k in k0..k1 {
        let ak = a[k as usize];
        for (o, c) in dst.iter_mut().zip(f.coeff(j + s * k)) {
            *o += c * ak;
        }
    }
}

fn tail_mass_sqr(f: &SpectralFunction, a: &[f64], range: std::ops::Range<i64>, s: i64) -> f64 {
    let mut buf = vec![Complex64::new(0.0, 0.0); f.dim()];
    range
        .map(|j| {
            toeplitz_coeff(f, a, j, s, &mut buf);
            buf.iter().map(|c| c.norm_sqr()).sum::<f64>()
        })
        .sum()
}

/// `e^{-itλ} f` without any leak check.
pub fn reference_evolve_raw(f: &SpectralFunction, t: f64) -> Result<Evolved> {
    let t = EvolutionTime::new(t)?.value();
    let n = f.trunc() as i64;
    let span = TAIL_SPAN as i64 * n;
    let a = laguerre_symbol(t.abs(), (2 + TAIL_SPAN) * f.trunc());
    // t ≥ 0: (U c)_j = Σ aₖ c_{j+k}; t < 0: (U c)_j = Σ aₖ c_{j-k}
    let s = if t >= 0.0 { 1 } else { -1 };
    let mut out = SpectralFunction::zeros(f.dim(), f.trunc());
    for j in f.indices() {
        toeplitz_coeff(f, &a, j, s, out.coeff_mut(j));
    }
    let tail = if s > 0 { -n - span..-n } else { n..n + span };
    let discarded = lost_mass(f.norm(), &out, tail_mass_sqr(f, &a, tail, s));
    Ok(Evolved {
        function: out,
        discarded,
    })
}

/// `e^{-itλ} f`, rejecting results that lose more than `tolerance·‖f‖`.
pub fn reference_evolve_with(f: &SpectralFunction, t: f64, tolerance: f64) -> Result<Evolved> {
    EvolutionTime::new(t)?.within(DEFAULT_T_MAX)?;
    let e = reference_evolve_raw(f, t)?;
    check_leak(e.discarded, tolerance * f.norm(), f.trunc())?;
    Ok(e)
}

/// `e^{-itλ} f` at the default leak tolerance.
pub fn reference_evolve(f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    Ok(reference_evolve_with(f, t, DEFAULT_EVOLVE_LEAK_TOLERANCE)?.function)
}

/// `T₊(t) f = Q₊ e^{-itλ} Q₊ f`, `t ≥ 0`.
///
/// The `H²₋` part of `f` is dropped first; its size is `f.hardy_norm(Minus)`.
/// On truncated data the result is exact: the upper-triangular Toeplitz
/// action only reads coefficients inside the window.
pub fn characteristic_apply(f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    let t = EvolutionTime::forward(t)?.value();
    let n = f.trunc();
    let a = laguerre_symbol(t, n);
    let mut out = SpectralFunction::zeros(f.dim(), n);
    for j in 0..n as i64 {
        let dst = out.coeff_mut(j);
        for (k, ak) in a.iter().enumerate().take(n - j as usize) {
            for (o, c) in dst.iter_mut().zip(f.coeff(j + k as i64)) {
                *o += c * ak;
            }
        }
    }
    Ok(out)
}

/// `T₊(t)* f = e^{itλ} Q₊ f`, `t ≥ 0`, truncated to the window.
///
/// The exact image is an isometric copy of `Q₊f` whose tail extends past any
/// truncation; `discarded` measures what fell off.
pub fn characteristic_adjoint_apply(f: &SpectralFunction, t: f64) -> Result<Evolved> {
    let t = EvolutionTime::forward(t)?.value();
    let n = f.trunc() as i64;
    let plus = f.hardy_project(HardySign::Plus);
    let a = laguerre_symbol(t, (1 + TAIL_SPAN) * f.trunc());
    let mut out = SpectralFunction::zeros(f.dim(), f.trunc());
    // (T* c)_j = Σ_{m ≤ j} a_{j-m} c_m
    for j in 0..n {
        toeplitz_coeff(&plus, &a, j, -1, out.coeff_mut(j));
    }
    let tail = tail_mass_sqr(&plus, &a, n..n + TAIL_SPAN as i64 * n, -1);
    let discarded = lost_mass(plus.norm(), &out, tail);
    Ok(Evolved {
        function: out,
        discarded,
    })
}

/// `‖T₊(t) f‖` for each requested time.
pub fn decay_profile(f: &SpectralFunction, times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| characteristic_apply(f, t).map(|g| g.norm()))
        .collect()
}

/// The eigenvector symbol `(ζ, k)`, `Im ζ < 0`, realizing `λ ↦ k/(λ - ζ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproducingVector {
    pub zeta: Complex64,
    pub k: Vec<Complex64>,
}

impl ReproducingVector {
    /// Enforces `|Im ζ| ≥ MIN_POLE_DISTANCE`.
    pub fn new(zeta: Complex64, k: Vec<Complex64>) -> Result<Self> {
        let v = Self::new_unchecked_distance(zeta, k)?;
        if -zeta.im < MIN_POLE_DISTANCE {
            return Err(Error::domain(format!(
                "|Im zeta| = {} is below {MIN_POLE_DISTANCE}; the default truncation cannot \
                 resolve this pole (use new_unchecked_distance and a larger N)",
                -zeta.im
            )));
        }
        Ok(v)
    }

    /// Only requires `Im ζ < 0` and `k ≠ 0`; accuracy near the axis is the caller's problem.
    pub fn new_unchecked_distance(zeta: Complex64, k: Vec<Complex64>) -> Result<Self> {
        if !(zeta.im < 0.0) {
            return Err(Error::domain(format!(
                "eigenvectors exist only for Im zeta < 0, got {zeta}"
            )));
        }
        if k.is_empty() || k.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::domain("k must be a nonzero vector"));
        }
        Ok(Self { zeta, k })
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn k_norm(&self) -> f64 {
        self.k.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖f_{ζ,k}‖ = (π/|Im ζ|)^{1/2} ‖k‖`.
    pub fn norm(&self) -> f64 {
        (PI / -self.zeta.im).sqrt() * self.k_norm()
    }

    /// `k/(z - ζ)`.
    pub fn value(&self, z: Complex64) -> Vec<Complex64> {
        let s = 1.0 / (z - self.zeta);
        self.k.iter().map(|c| c * s).collect()
    }

    /// Ratio of consecutive basis coefficients.
    pub fn ratio(&self) -> Complex64 {
        -(I + self.zeta) / (I - self.zeta)
    }

    /// Norm of the coefficients at indices `≥ trunc`.
    pub fn truncation_tail(&self, trunc: usize) -> f64 {
        let q = self.ratio().norm();
        let c0 = 2.0 * PI.sqrt() / (I - self.zeta).norm() * self.k_norm();
        c0 * q.powi(trunc as i32) / (1.0 - q * q).sqrt()
    }

    /// Basis coefficients: `cₙ = √π · 2i/(i - ζ) · (-q)ⁿ k`, `q = (i + ζ)/(i - ζ)`, `n ≥ 0`.
    pub fn realize(&self, trunc: usize) -> SpectralFunction {
        let mut f = SpectralFunction::zeros(self.dim(), trunc);
        let r = self.ratio();
        let mut c = PI.sqrt() * 2.0 * I / (I - self.zeta);
        for n in 0..trunc as i64 {
            for (o, k) in f.coeff_mut(n).iter_mut().zip(&self.k) {
                *o = c * k;
            }
            c *= r;
        }
        f
    }
}

/// `f_{ζ,k}` at truncation `trunc`, with the default pole-distance check.
pub fn make_reproducing(
    zeta: Complex64,
    k: &[Complex64],
    trunc: usize,
) -> Result<SpectralFunction> {
    Ok(ReproducingVector::new(zeta, k.to_vec())?.realize(trunc))
}
