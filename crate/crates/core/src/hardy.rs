//! Discretized vector-valued `L²(ℝ, 𝒦)` and its Hardy splitting.
//!
//! Functions are stored as coefficients in the rational orthonormal system
//!
//! ```text
//! φₙ(λ) = π^{-1/2} (λ - i)ⁿ / (λ + i)^{n+1},   n ∈ [-N, N)
//! ```
//!
//! which is the circle Fourier basis pulled back through the Cayley map
//! `w = (λ - i)/(λ + i)`. Indices `n ≥ 0` span the upper Hardy space `H²₊`
//! and indices `n < 0` span `H²₋`, so both Hardy projections are exact
//! coordinate truncations.
//!
//! The Fourier convention is `(Ff)(p) = (2π)^{-1/2} ∫ e^{-ipx} f(x) dx`; with it
//! `H²₊` is the image of functions supported on the negative half-line.
//! Spectral data produced under the opposite convention must be conjugated
//! (λ ↦ -λ) before it is loaded here.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: usize = 512;
pub const DEFAULT_GRID_FACTOR: usize = 4;

/// Smallest admissible ratio between sample count and truncation.
pub const ANTI_ALIASING_FACTOR: usize = 4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The multiplicity space 𝒦, here `ℂ^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicitySpace {
    dim: usize,
}

impl MultiplicitySpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("multiplicity dimension must be at least 1"));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Standard basis vector `e_j`.
    pub fn unit(&self, j: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim];
        v[j] = Complex64::new(1.0, 0.0);
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardySign {
    Plus,
    Minus,
}

impl HardySign {
    pub fn opposite(self) -> Self {
        match self {
            HardySign::Plus => HardySign::Minus,
            HardySign::Minus => HardySign::Plus,
        }
    }
}

/// A 𝒦-valued function on the real line, truncated to basis indices `[-N, N)`.
#[derive(Clone, PartialEq)]
pub struct SpectralFunction {
    dim: usize,
    trunc: usize,
    // coefficient of φₙ, component d, lives at (n + N) * dim + d
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("dim", &self.dim)
            .field("trunc", &self.trunc)
            .field("norm", &self.norm())
            .finish()
    }
}

impl SpectralFunction {
    pub fn zeros(dim: usize, trunc: usize) -> Self {
        assert!(
            dim >= 1 && trunc >= 1,
            "dim and truncation must be positive"
        );
        Self {
            dim,
            trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * trunc * dim],
        }
    }

    pub fn from_coeffs(dim: usize, trunc: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || trunc == 0 {
            return Err(Error::domain("dim and truncation must be positive"));
        }
        if coeffs.len() != 2 * trunc * dim {
            return Err(Error::LengthMismatch {
                expected: 2 * trunc * dim,
                found: coeffs.len(),
            });
        }
        Ok(Self { dim, trunc, coeffs })
    }

    /// `k · φₙ`.
    pub fn basis_element(trunc: usize, n: i64, k: &[Complex64]) -> Result<Self> {
        let mut f = Self::zeros(k.len().max(1), trunc);
        if k.is_empty() {
            return Err(Error::domain("empty multiplicity vector"));
        }
        if n < -(trunc as i64) || n >= trunc as i64 {
            return Err(Error::domain(format!(
                "basis index {n} outside [-{trunc}, {trunc})"
            )));
        }
        f.coeff_mut(n).copy_from_slice(k);
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Range of basis indices `[-N, N)`.
    pub fn indices(&self) -> std::ops::Range<i64> {
        -(self.trunc as i64)..self.trunc as i64
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    fn offset(&self, n: i64) -> usize {
        debug_assert!(n >= -(self.trunc as i64) && n < self.trunc as i64);
        (n + self.trunc as i64) as usize * self.dim
    }

    pub fn coeff(&self, n: i64) -> &[Complex64] {
        let o = self.offset(n);
        &self.coeffs[o..o + self.dim]
    }

    pub fn coeff_mut(&mut self, n: i64) -> &mut [Complex64] {
        let o = self.offset(n);
        let d = self.dim;
        &mut self.coeffs[o..o + d]
    }

    /// Coefficient block of one Hardy half (`n ≥ 0` or `n < 0`), in index order.
    pub fn half(&self, sign: HardySign) -> &[Complex64] {
        let mid = self.trunc * self.dim;
        match sign {
            HardySign::Plus => &self.coeffs[mid..],
            HardySign::Minus => &self.coeffs[..mid],
        }
    }

    pub fn half_mut(&mut self, sign: HardySign) -> &mut [Complex64] {
        let mid = self.trunc * self.dim;
        match sign {
            HardySign::Plus => &mut self.coeffs[mid..],
            HardySign::Minus => &mut self.coeffs[..mid],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.check_compatible(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn hardy_norm(&self, sign: HardySign) -> f64 {
        self.half(sign)
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Copy with every component outside `target` zeroed.
    pub fn hardy_project(&self, sign: HardySign) -> Self {
        let mut out = self.clone();
        out.half_mut(sign.opposite())
            .iter_mut()
            .for_each(|c| *c = Complex64::new(0.0, 0.0));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: Complex64, other: &Self) {
        self.check_compatible(other);
        self.coeffs
            .iter_mut()
            .zip(&other.coeffs)
            .for_each(|(c, o)| *c += a * o);
    }

    /// Re-express at truncation `new_trunc`, returning the norm of whatever
    /// had to be dropped.
    pub fn retruncate(&self, new_trunc: usize) -> (Self, f64) {
        let mut out = Self::zeros(self.dim, new_trunc);
        let mut dropped = 0.0;
        for n in self.indices() {
            if n >= -(new_trunc as i64) && n < new_trunc as i64 {
                out.coeff_mut(n).copy_from_slice(self.coeff(n));
            } else {
                dropped += self.coeff(n).iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
        }
        (out, dropped.sqrt())
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "multiplicity dimension mismatch");
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
    }
}

impl Add for &SpectralFunction {
    type Output = SpectralFunction;
    fn add(self, rhs: &SpectralFunction) -> SpectralFunction {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), rhs);
        out
    }
}

impl Sub for &SpectralFunction {
    type Output = SpectralFunction;
    fn sub(self, rhs: &SpectralFunction) -> SpectralFunction {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), rhs);
        out
    }
}

impl Neg for &SpectralFunction {
    type Output = SpectralFunction;
    fn neg(self) -> SpectralFunction {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &SpectralFunction {
    type Output = SpectralFunction;
    fn mul(self, rhs: Complex64) -> SpectralFunction {
        self.scale(rhs)
    }
}

/// Q₊ or Q₋ applied to `f`.
pub fn hardy_project(f: &SpectralFunction, sign: HardySign) -> SpectralFunction {
    f.hardy_project(sign)
}

/// Cayley image `w = (z - i)/(z + i)` of a point in ℂ.
pub fn cayley(z: Complex64) -> Complex64 {
    (z - I) / (z + I)
}

/// Inverse Cayley map `λ = i(1 + w)/(1 - w)`.
pub fn inverse_cayley(w: Complex64) -> Complex64 {
    I * (1.0 + w) / (1.0 - w)
}

/// `φₙ(z)` evaluated directly from its closed form.
pub fn basis_value(n: i64, z: Complex64) -> Complex64 {
    let w = cayley(z);
    w.powi(n as i32) / (PI.sqrt() * (z + I))
}

/// `(Q₊f)(z)` for `Im z > 0`.
pub fn evaluate_upper(f: &SpectralFunction, z: Complex64) -> Result<Vec<Complex64>> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!(
            "evaluate_upper needs Im z > 0, got {z}; use evaluate_lower for the lower half-plane"
        )));
    }
    let w = cayley(z);
    let mut acc = vec![Complex64::new(0.0, 0.0); f.dim];
    for n in (0..f.trunc as i64).rev() {
        for (a, c) in acc.iter_mut().zip(f.coeff(n)) {
            *a = *a * w + c;
        }
    }
    let pre = 1.0 / (PI.sqrt() * (z + I));
    Ok(acc.into_iter().map(|a| a * pre).collect())
}

/// `(Q₋f)(z)` for `Im z < 0`.
pub fn evaluate_lower(f: &SpectralFunction, z: Complex64) -> Result<Vec<Complex64>> {
    if !(z.im < 0.0) {
        return Err(Error::domain(format!(
            "evaluate_lower needs Im z < 0, got {z}"
        )));
    }
    // φ_{-m}(z) = π^{-1/2} u^m / (z + i) with u = 1/w, |u| < 1 below the axis
    let u = (z + I) / (z - I);
    let mut acc = vec![Complex64::new(0.0, 0.0); f.dim];
    for m in (1..=f.trunc as i64).rev() {
        for (a, c) in acc.iter_mut().zip(f.coeff(-m)) {
            *a = (*a + c) * u;
        }
    }
    let pre = 1.0 / (PI.sqrt() * (z + I));
    Ok(acc.into_iter().map(|a| a * pre).collect())
}

/// Pointwise value `f(λ)` on the real axis, summed directly over the basis.
pub fn evaluate_real(f: &SpectralFunction, lambda: f64) -> Vec<Complex64> {
    let z = Complex64::new(lambda, 0.0);
    let w = cayley(z);
    let winv = w.conj();
    let mut up = vec![Complex64::new(0.0, 0.0); f.dim];
    for n in (0..f.trunc as i64).rev() {
        for (a, c) in up.iter_mut().zip(f.coeff(n)) {
            *a = *a * w + c;
        }
    }
    let mut down = vec![Complex64::new(0.0, 0.0); f.dim];
    for m in (1..=f.trunc as i64).rev() {
        for (a, c) in down.iter_mut().zip(f.coeff(-m)) {
            *a = (*a + c) * winv;
        }
    }
    let pre = 1.0 / (PI.sqrt() * (z + I));
    up.iter().zip(&down).map(|(a, b)| (a + b) * pre).collect()
}

/// Offset uniform grid on the unit circle, pulled back to the real line.
#[derive(Clone)]
pub struct SamplingGrid {
    circle: Vec<Complex64>,
    nodes: Vec<Complex64>,
    // e^{iπj/M}: the half-step offset folded into the transform
    shift: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SamplingGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SamplingGrid")
            .field("m_samples", &self.len())
            .finish()
    }
}

impl SamplingGrid {
    pub fn new(m_samples: usize) -> Result<Self> {
        if m_samples < 2 {
            return Err(Error::domain("sampling grid needs at least 2 nodes"));
        }
        let m = m_samples as f64;
        let circle: Vec<Complex64> = (0..m_samples)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / m))
            .collect();
        let nodes = circle.iter().map(|&w| inverse_cayley(w)).collect();
        let shift = (0..m_samples)
            .map(|j| Complex64::from_polar(1.0, PI * j as f64 / m))
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            circle,
            nodes,
            shift,
            forward: planner.plan_fft(m_samples, FftDirection::Forward),
            inverse: planner.plan_fft(m_samples, FftDirection::Inverse),
        })
    }

    /// Grid with `grid_factor · trunc` nodes.
    pub fn for_truncation(trunc: usize, grid_factor: usize) -> Result<Self> {
        let g = Self::new(trunc * grid_factor)?;
        g.check(trunc)?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.circle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circle.is_empty()
    }

    /// Real-line nodes λₘ.
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// Circle nodes wₘ.
    pub fn circle(&self) -> &[Complex64] {
        &self.circle
    }

    /// Anti-aliasing rule `M ≥ 4N`.
    pub fn check(&self, trunc: usize) -> Result<()> {
        let required = ANTI_ALIASING_FACTOR * trunc;
        if self.len() < required {
            return Err(Error::Aliasing {
                samples: self.len(),
                trunc_n: trunc,
                required,
            });
        }
        Ok(())
    }

    fn slot(&self, n: i64) -> usize {
        n.rem_euclid(self.len() as i64) as usize
    }

    fn shift_for(&self, n: i64) -> Complex64 {
        // e^{iπn/M} = ±e^{iπj/M} depending on whether n wrapped
        let s = self.shift[self.slot(n)];
        if n < 0 {
            -s
        } else {
            s
        }
    }
}

/// Values of a 𝒦-valued function at the grid nodes, node-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    dim: usize,
    values: Vec<Complex64>,
}

impl Samples {
    pub fn new(dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !values.len().is_multiple_of(dim) {
            return Err(Error::LengthMismatch {
                expected: dim.max(1) * (values.len() / dim.max(1)),
                found: values.len(),
            });
        }
        Ok(Self { dim, values })
    }

    /// Sample `f` at every grid node; `f` writes the 𝒦-vector `f(λ)` into `out`.
    pub fn from_fn(
        grid: &SamplingGrid,
        dim: usize,
        mut f: impl FnMut(Complex64, &mut [Complex64]),
    ) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len() * dim];
        for (lam, out) in grid.nodes().iter().zip(values.chunks_mut(dim)) {
            f(*lam, out);
        }
        Self { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, m: usize) -> &[Complex64] {
        &self.values[m * self.dim..(m + 1) * self.dim]
    }

    pub fn at_mut(&mut self, m: usize) -> &mut [Complex64] {
        let d = self.dim;
        &mut self.values[m * d..(m + 1) * d]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Result of projecting samples back onto the truncated basis.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub function: SpectralFunction,
    /// ℓ² norm of the circle coefficients that fell outside `[-N, N)`.
    pub discarded: f64,
}

/// Samples `f(λₘ)` via one inverse FFT per component.
pub fn synthesize(f: &SpectralFunction, grid: &SamplingGrid) -> Result<Samples> {
    grid.check(f.trunc)?;
    let m = grid.len();
    let dim = f.dim;
    let mut values = vec![Complex64::new(0.0, 0.0); m * dim];
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let norm = 1.0 / (2.0 * I * PI.sqrt());
    for d in 0..dim {
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for n in f.indices() {
            buf[grid.slot(n)] = f.coeff(n)[d] * grid.shift_for(n);
        }
        grid.inverse.process(&mut buf);
        // f(λ) = g(w) / (√π (λ + i)) and 1/(λ + i) = (1 - w)/(2i)
        for (j, g) in buf.iter().enumerate() {
            values[j * dim + d] = g * (1.0 - grid.circle[j]) * norm;
        }
    }
    Ok(Samples { dim, values })
}

/// Left inverse of [`synthesize`]; errors only on shape mismatch.
pub fn analyze(samples: &Samples, grid: &SamplingGrid, trunc: usize) -> Result<SpectralFunction> {
    Ok(analyze_with_leak(samples, grid, trunc)?.function)
}

/// [`analyze`] plus the norm of the coefficients outside the truncation.
pub fn analyze_with_leak(samples: &Samples, grid: &SamplingGrid, trunc: usize) -> Result<Analysis> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            found: samples.len(),
        });
    }
    if 2 * trunc > grid.len() {
        return Err(Error::Aliasing {
            samples: grid.len(),
            trunc_n: trunc,
            required: 2 * trunc,
        });
    }
    let m = grid.len();
    let dim = samples.dim;
    let mut out = SpectralFunction::zeros(dim, trunc);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let scale = 2.0 * I * PI.sqrt() / m as f64;
    let mut kept = vec![false; m];
    for n in out.indices() {
        kept[grid.slot(n)] = true;
    }
    let mut discarded = 0.0;
    for d in 0..dim {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = samples.values[j * dim + d] * scale / (1.0 - grid.circle[j]);
        }
        grid.forward.process(&mut buf);
        for n in out.indices() {
            out.coeff_mut(n)[d] = buf[grid.slot(n)] * grid.shift_for(n).conj();
        }
        discarded += buf
            .iter()
            .zip(&kept)
            .filter(|(_, k)| !**k)
            .map(|(b, _)| b.norm_sqr())
            .sum::<f64>();
    }
    Ok(Analysis {
        function: out,
        discarded: discarded.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::close;

    mod approx_eq {
        use num_complex::Complex64;
        pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
            (a - b).norm() <= tol * (1.0 + b.norm())
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi0_at_origin() {
        let grid = SamplingGrid::new(64).unwrap();
        let f = SpectralFunction::basis_element(8, 0, &[c(1.0, 0.0)]).unwrap();
        let v = evaluate_real(&f, 0.0)[0];
        assert!(close(v, c(0.0, -1.0 / PI.sqrt()), 1e-14));
        // synthesized samples agree with the closed form at every node
        let s = synthesize(&f, &grid).unwrap();
        for (m, lam) in grid.nodes().iter().enumerate() {
            assert!(close(s.at(m)[0], 1.0 / (PI.sqrt() * (lam + I)), 1e-12));
        }
    }

    #[test]
    fn phi1_at_one() {
        let f = SpectralFunction::basis_element(4, 1, &[c(1.0, 0.0)]).unwrap();
        let expected = (c(1.0, 0.0) - I) / ((c(1.0, 0.0) + I).powi(2) * PI.sqrt());
        assert!(close(evaluate_real(&f, 1.0)[0], expected, 1e-14));
        assert!(close(basis_value(1, c(1.0, 0.0)), expected, 1e-14));
        let grid = SamplingGrid::new(16).unwrap();
        let s = synthesize(&f, &grid).unwrap();
        for (m, lam) in grid.nodes().iter().enumerate() {
            assert!(close(s.at(m)[0], basis_value(1, *lam), 1e-13));
        }
    }

    #[test]
    fn zero_round_trip() {
        let grid = SamplingGrid::new(32).unwrap();
        let f = SpectralFunction::zeros(2, 8);
        let s = synthesize(&f, &grid).unwrap();
        assert!(s.values().iter().all(|v| v.norm() == 0.0));
        assert!(analyze(&s, &grid, 8).unwrap().is_zero());
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = SamplingGrid::new(31).unwrap();
        let f = SpectralFunction::zeros(1, 8);
        assert!(matches!(
            synthesize(&f, &grid),
            Err(Error::Aliasing { required: 32, .. })
        ));
    }

    #[test]
    fn length_mismatch_rejected() {
        let grid = SamplingGrid::new(32).unwrap();
        let s = Samples::new(1, vec![c(0.0, 0.0); 16]).unwrap();
        assert!(matches!(
            analyze(&s, &grid, 8),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn projections_are_complementary() {
        let mut f = SpectralFunction::zeros(1, 4);
        for (j, x) in f.coeffs_mut().iter_mut().enumerate() {
            *x = c(j as f64, 1.0 - j as f64);
        }
        let p = f.hardy_project(HardySign::Plus);
        let m = f.hardy_project(HardySign::Minus);
        assert_eq!(&p + &m, f);
        assert_eq!(p.hardy_project(HardySign::Plus), p);
        assert_eq!(p.inner(&m), c(0.0, 0.0));
        assert!(p.coeff(-1)[0] == c(0.0, 0.0) && m.coeff(0)[0] == c(0.0, 0.0));
    }

    #[test]
    fn evaluate_upper_rejects_lower_half_plane() {
        let f = SpectralFunction::zeros(1, 4);
        assert!(evaluate_upper(&f, c(0.0, -1.0)).is_err());
        assert!(evaluate_upper(&f, c(1.0, 0.0)).is_err());
        assert!(evaluate_lower(&f, c(0.0, 1.0)).is_err());
    }

    #[test]
    fn half_plane_evaluations_match_basis() {
        let mut f = SpectralFunction::zeros(1, 6);
        f.coeff_mut(2)[0] = c(0.5, -1.0);
        f.coeff_mut(-3)[0] = c(2.0, 0.25);
        let z = c(0.3, 0.7);
        let up = evaluate_upper(&f, z).unwrap()[0];
        assert!(close(up, c(0.5, -1.0) * basis_value(2, z), 1e-14));
        let zl = c(-0.4, -1.3);
        let lo = evaluate_lower(&f, zl).unwrap()[0];
        assert!(close(lo, c(2.0, 0.25) * basis_value(-3, zl), 1e-14));
    }

    #[test]
    fn leak_reports_out_of_range_content() {
        // φ₅ represented at N = 8 and analyzed at N = 4 leaks exactly its norm
        let grid = SamplingGrid::new(32).unwrap();
        let f = SpectralFunction::basis_element(8, 5, &[c(3.0, 4.0)]).unwrap();
        let s = synthesize(&f, &grid).unwrap();
        let a = analyze_with_leak(&s, &grid, 4).unwrap();
        assert!(a.function.norm() < 1e-13);
        assert!((a.discarded - 5.0).abs() < 1e-12);
    }
}
