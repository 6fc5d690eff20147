//! Pointwise-unitary scattering matrices
//!
//! ```text
//! S(z) = U · B₁(z) ⋯ Bₙ(z) · e^{iθ(z)}
//! ```
//!
//! built from a constant unitary `U`, Blaschke–Potapov factors
//! `B(z) = (1 - P) + b(z) P`, and an optional scalar phase `θ` that is a sum
//! of real Lorentzians. Every piece has a rational (or, for the phase,
//! meromorphic-exponential) continuation off the axis.

use std::f64::consts::PI;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{analyze_with_leak, synthesize, Analysis, SamplingGrid, SpectralFunction};

/// Default relative tolerance on coefficient mass pushed past the truncation.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-8;

/// Poles closer than this are treated as one.
pub const POLE_MERGE_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub type KMatrix = Mat<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `b(z) = (z - μ)/(z - μ̄)`: zero at μ, pole at μ̄ ∈ ℂ₋.
    Inner,
    /// `b(z) = (z - μ̄)/(z - μ)`: zero at μ̄, pole at μ ∈ ℂ₊.
    AntiInner,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Inner => Orientation::AntiInner,
            Orientation::AntiInner => Orientation::Inner,
        }
    }
}

/// Frobenius norm.
pub fn frobenius(m: &KMatrix) -> f64 {
    m.norm_l2()
}

/// `‖M*M - 1‖_F`.
pub fn unitarity_residual(m: &KMatrix) -> f64 {
    let n = m.nrows();
    let g = m.adjoint() * m;
    frobenius(&(g - KMatrix::identity(n, n)))
}

pub fn mat_vec(m: &KMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Rank-one orthogonal projection onto `span{v}`.
pub fn rank_one_projector(v: &[Complex64]) -> Result<KMatrix> {
    let nrm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if nrm == 0.0 {
        return Err(Error::domain("projector direction must be nonzero"));
    }
    Ok(KMatrix::from_fn(v.len(), v.len(), |i, j| {
        v[i] * v[j].conj() / (nrm * nrm)
    }))
}

/// One Blaschke–Potapov factor `(1 - P) + b(z) P`.
#[derive(Clone, Debug)]
pub struct BlaschkeFactor {
    mu: Complex64,
    proj: KMatrix,
    rank: usize,
    orientation: Orientation,
}

impl BlaschkeFactor {
    pub fn new(mu: Complex64, proj: KMatrix, orientation: Orientation) -> Result<Self> {
        if !(mu.im > 0.0) || !mu.re.is_finite() || !mu.im.is_finite() {
            return Err(Error::domain(format!(
                "Blaschke zero must satisfy Im mu > 0, got {mu}"
            )));
        }
        let n = proj.nrows();
        if n == 0 || proj.ncols() != n {
            return Err(Error::domain("projection must be a nonempty square matrix"));
        }
        let idem = frobenius(&(&proj * &proj - &proj));
        let herm = frobenius(&(&proj - proj.adjoint()));
        let residual = idem.max(herm);
        if residual > 1e-10 {
            return Err(Error::NotProjection { residual });
        }
        let trace: f64 = (0..n).map(|i| proj[(i, i)].re).sum();
        let rank = trace.round() as usize;
        if rank == 0 {
            return Err(Error::domain("Blaschke factor projection has rank 0"));
        }
        Ok(Self {
            mu,
            proj,
            rank,
            orientation,
        })
    }

    /// Scalar factor on `𝒦 = ℂ`.
    pub fn scalar(mu: Complex64, orientation: Orientation) -> Result<Self> {
        Self::new(mu, KMatrix::identity(1, 1), orientation)
    }

    /// Factor acting as `b(z)` on all of `ℂ^dim`.
    pub fn full(mu: Complex64, dim: usize, orientation: Orientation) -> Result<Self> {
        Self::new(mu, KMatrix::identity(dim, dim), orientation)
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn proj(&self) -> &KMatrix {
        &self.proj
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.proj.nrows()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn pole(&self) -> Complex64 {
        match self.orientation {
            Orientation::Inner => self.mu.conj(),
            Orientation::AntiInner => self.mu,
        }
    }

    pub fn zero(&self) -> Complex64 {
        match self.orientation {
            Orientation::Inner => self.mu,
            Orientation::AntiInner => self.mu.conj(),
        }
    }

    /// Scalar symbol `b(z)`; `None` at the pole.
    pub fn symbol(&self, z: Complex64) -> Option<Complex64> {
        let den = z - self.pole();
        if den.norm() == 0.0 {
            return None;
        }
        Some((z - self.zero()) / den)
    }

    pub fn eval(&self, z: Complex64) -> Result<KMatrix> {
        let b = self.symbol(z).ok_or(Error::Pole {
            location: self.pole(),
        })?;
        let n = self.dim();
        Ok(KMatrix::identity(n, n) + &self.proj * faer::Scale(b - ONE))
    }
}

/// `a / (1 + ((λ - c)/w)²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lorentzian {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl Lorentzian {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let u = (z - self.center) / self.width;
        self.amplitude / (1.0 + u * u)
    }

    pub fn poles(&self) -> [Complex64; 2] {
        [
            Complex64::new(self.center, self.width),
            Complex64::new(self.center, -self.width),
        ]
    }
}

/// Real rational phase `θ(λ) = Σ Lorentzians`, applied as `exp(iθ)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SmoothPhase {
    pub terms: Vec<Lorentzian>,
}

impl SmoothPhase {
    /// `θ(λ) = a/(1 + λ²)`.
    pub fn lorentzian(amplitude: f64) -> Self {
        Self {
            terms: vec![Lorentzian {
                amplitude,
                center: 0.0,
                width: 1.0,
            }],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if !(t.width > 0.0) || !t.amplitude.is_finite() || !t.center.is_finite() {
                return Err(Error::domain(format!("invalid phase term {t:?}")));
            }
        }
        Ok(())
    }

    pub fn theta(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Lorentzian {
                    amplitude: -t.amplitude,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn singularities(&self) -> Vec<Complex64> {
        self.terms.iter().flat_map(|t| t.poles()).collect()
    }
}

/// `S(z) = U · B₁(z) ⋯ Bₙ(z) · e^{iθ(z)}`.
#[derive(Clone, Debug)]
pub struct ScatteringMatrix {
    dim: usize,
    constant: KMatrix,
    factors: Vec<BlaschkeFactor>,
    phase: Option<SmoothPhase>,
}

impl ScatteringMatrix {
    pub fn new(
        constant: KMatrix,
        factors: Vec<BlaschkeFactor>,
        phase: Option<SmoothPhase>,
    ) -> Result<Self> {
        let dim = constant.nrows();
        if dim == 0 || constant.ncols() != dim {
            return Err(Error::domain(
                "constant factor must be a nonempty square matrix",
            ));
        }
        let residual = unitarity_residual(&constant);
        if residual > 1e-10 {
            return Err(Error::domain(format!(
                "constant factor is not unitary (residual {residual:.3e})"
            )));
        }
        for f in &factors {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        if let Some(p) = &phase {
            p.validate()?;
        }
        Ok(Self {
            dim,
            constant,
            factors,
            phase,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            constant: KMatrix::identity(dim, dim),
            factors: vec![],
            phase: None,
        }
    }

    pub fn constant(u: KMatrix) -> Result<Self> {
        Self::new(u, vec![], None)
    }

    /// Product of scalar factors, no constant or phase.
    pub fn scalar_product(zeros: &[(Complex64, Orientation)]) -> Result<Self> {
        let factors = zeros
            .iter()
            .map(|&(mu, o)| BlaschkeFactor::scalar(mu, o))
            .collect::<Result<_>>()?;
        Self::new(KMatrix::identity(1, 1), factors, None)
    }

    /// Scalar `exp(iθ)`.
    pub fn smooth(phase: SmoothPhase) -> Result<Self> {
        Self::new(KMatrix::identity(1, 1), vec![], Some(phase))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant_factor(&self) -> &KMatrix {
        &self.constant
    }

    pub fn factors(&self) -> &[BlaschkeFactor] {
        &self.factors
    }

    pub fn phase(&self) -> Option<&SmoothPhase> {
        self.phase.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.phase.as_ref().is_none_or(|p| p.terms.is_empty())
    }

    /// No anti-inner factors and no phase.
    pub fn is_inner(&self) -> bool {
        self.is_rational()
            && self
                .factors
                .iter()
                .all(|f| f.orientation == Orientation::Inner)
    }

    /// Sum of ranks of the inner factors.
    pub fn inner_degree(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| f.orientation == Orientation::Inner)
            .map(|f| f.rank)
            .sum()
    }

    /// Every point where the continuation is undefined.
    pub fn singularities(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.factors.iter().map(|f| f.pole()).collect();
        if let Some(p) = &self.phase {
            out.extend(p.singularities());
        }
        out
    }
}

/// `S(z)`, continued off the axis by the factor formulas.
pub fn eval_scattering(s: &ScatteringMatrix, z: Complex64) -> Result<KMatrix> {
    let mut m = s.constant.clone();
    for f in &s.factors {
        m = &m * f.eval(z)?;
    }
    if let Some(p) = &s.phase {
        if let Some(&location) = p.singularities().iter().find(|q| (**q - z).norm() == 0.0) {
            return Err(Error::Pole { location });
        }
        let e = (I * p.theta(z)).exp();
        m = &m * faer::Scale(e);
    }
    Ok(m)
}

/// Pointwise adjoint `λ ↦ S(λ)*`, continued as the paraconjugate `z ↦ S(z̄)*`.
///
/// `e^{-iθ} Bₙ* ⋯ B₁* U* = U* (U Bₙ* U*) ⋯ (U B₁* U*)`, and on the axis
/// `U B* U*` is the opposite-orientation factor with projection `U P U*`.
pub fn adjoint_scattering(s: &ScatteringMatrix) -> ScatteringMatrix {
    let u = &s.constant;
    let factors = s
        .factors
        .iter()
        .rev()
        .map(|f| {
            let p = u * &f.proj * u.adjoint();
            // hermitize away roundoff so the structural involution is exact in practice
            let p = (&p + p.adjoint()) * faer::Scale(Complex64::new(0.5, 0.0));
            BlaschkeFactor {
                mu: f.mu,
                proj: p,
                rank: f.rank,
                orientation: f.orientation.flipped(),
            }
        })
        .collect();
    ScatteringMatrix {
        dim: s.dim,
        constant: u.adjoint().to_owned(),
        factors,
        phase: s.phase.as_ref().map(|p| p.negated()),
    }
}

/// Poles of the continuation, split by half-plane, with merged multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PoleSet {
    /// ℂ₋ poles (mirrored inner zeros): the resonance candidates.
    pub lower: Vec<(Complex64, usize)>,
    /// ℂ₊ poles from anti-inner factors.
    pub upper: Vec<(Complex64, usize)>,
}

pub fn pole_set(s: &ScatteringMatrix) -> Result<PoleSet> {
    if !s.is_rational() {
        return Err(Error::Unsupported(
            "pole set is only defined for rational scattering matrices".into(),
        ));
    }
    fn push(list: &mut Vec<(Complex64, usize)>, p: Complex64, r: usize) {
        match list
            .iter_mut()
            .find(|(q, _)| (*q - p).norm() <= POLE_MERGE_TOLERANCE)
        {
            Some(entry) => entry.1 += r,
            None => list.push((p, r)),
        }
    }
    let mut set = PoleSet::default();
    for f in &s.factors {
        match f.orientation {
            Orientation::Inner => push(&mut set.lower, f.pole(), f.rank),
            Orientation::AntiInner => push(&mut set.upper, f.pole(), f.rank),
        }
    }
    Ok(set)
}

/// `S(λₘ)` tabulated on a grid, ready to multiply sampled functions.
#[derive(Clone, Debug)]
pub struct SymbolSamples {
    dim: usize,
    grid: SamplingGrid,
    // node-major, each block row-major dim×dim
    values: Arc<Vec<Complex64>>,
}

impl SymbolSamples {
    pub fn new(s: &ScatteringMatrix, grid: &SamplingGrid) -> Result<Self> {
        let d = s.dim;
        let mut values = Vec::with_capacity(grid.len() * d * d);
        for &lam in grid.nodes() {
            let m = eval_scattering(s, lam)?;
            for i in 0..d {
                for j in 0..d {
                    values.push(m[(i, j)]);
                }
            }
        }
        Ok(Self {
            dim: d,
            grid: grid.clone(),
            values: Arc::new(values),
        })
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, m: usize) -> &[Complex64] {
        let b = self.dim * self.dim;
        &self.values[m * b..(m + 1) * b]
    }

    /// Largest `‖S(λₘ)*S(λₘ) - 1‖` over the nodes.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim;
        (0..self.grid.len())
            .map(|m| {
                let blk = self.at(m);
                unitarity_residual(&KMatrix::from_fn(d, d, |i, j| blk[i * d + j]))
            })
            .fold(0.0, f64::max)
    }

    /// Coefficients of `S f` with the out-of-truncation mass, unchecked.
    pub fn apply_raw(&self, f: &SpectralFunction) -> Result<Analysis> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: f.dim(),
            });
        }
        let mut samples = synthesize(f, &self.grid)?;
        let d = self.dim;
        let mut tmp = vec![ZERO; d];
        for m in 0..self.grid.len() {
            let blk = self.at(m);
            let v = samples.at_mut(m);
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = (0..d).map(|j| blk[i * d + j] * v[j]).sum();
            }
            v.copy_from_slice(&tmp);
        }
        analyze_with_leak(&samples, &self.grid, f.trunc())
    }

    /// Coefficients of `S f`; errors if more than `tolerance·‖f‖` leaks past the truncation.
    pub fn apply(&self, f: &SpectralFunction, tolerance: f64) -> Result<SpectralFunction> {
        let a = self.apply_raw(f)?;
        check_leak(a.discarded, f.norm() * tolerance, f.trunc())?;
        Ok(a.function)
    }
}

/// Absolute slack so that roundoff on (near-)zero inputs is never reported as a leak.
const LEAK_FLOOR: f64 = 1e-14;

pub(crate) fn check_leak(leak: f64, tolerance: f64, trunc: usize) -> Result<()> {
    let tolerance = tolerance + LEAK_FLOOR;
    if leak > tolerance {
        return Err(Error::TruncationLeak {
            leak,
            tolerance,
            suggested_n: 2 * trunc,
        });
    }
    Ok(())
}

/// Coefficients of `λ ↦ S(λ) f(λ)`, at the truncation of `f`.
pub fn apply_scattering(
    s: &ScatteringMatrix,
    f: &SpectralFunction,
    grid: &SamplingGrid,
) -> Result<SpectralFunction> {
    SymbolSamples::new(s, grid)?.apply(f, DEFAULT_LEAK_TOLERANCE)
}

/// Circle Fourier coefficients `Ŝⱼ`, `|j| < 2N`, of `S` viewed as a function of `w`.
///
/// Multiplication by `S` acts on basis coefficients as the block Laurent
/// matrix `(Ŝ_{m-n})`, so these determine every dense section.
#[derive(Clone, Debug)]
pub struct LaurentSymbol {
    dim: usize,
    trunc: usize,
    // index (j + 2N - 1) * dim² + row-major block
    blocks: Vec<Complex64>,
}

impl LaurentSymbol {
    /// Coefficients computed from `fine_factor · N` offset circle samples.
    pub fn new(s: &ScatteringMatrix, trunc: usize, fine_factor: usize) -> Result<Self> {
        let m = (fine_factor * trunc).max(4 * trunc);
        let grid = SamplingGrid::new(m)?;
        let d = s.dim;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let mut per_entry = vec![vec![ZERO; m]; d * d];
        for (k, &lam) in grid.nodes().iter().enumerate() {
            let sm = eval_scattering(s, lam)?;
            for i in 0..d {
                for j in 0..d {
                    per_entry[i * d + j][k] = sm[(i, j)];
                }
            }
        }
        for buf in per_entry.iter_mut() {
            fft.process(buf);
        }
        let span = 4 * trunc - 1;
        let mut blocks = vec![ZERO; span * d * d];
        for idx in 0..span {
            let j = idx as i64 - (2 * trunc as i64 - 1);
            let slot = j.rem_euclid(m as i64) as usize;
            // undo the half-step offset of the nodes
            let shift = Complex64::from_polar(1.0 / m as f64, -PI * j as f64 / m as f64);
            for e in 0..d * d {
                blocks[idx * d * d + e] = per_entry[e][slot] * shift;
            }
        }
        Ok(Self {
            dim: d,
            trunc,
            blocks,
        })
    }

    pub fn block(&self, j: i64) -> &[Complex64] {
        let idx = (j + 2 * self.trunc as i64 - 1) as usize;
        let b = self.dim * self.dim;
        &self.blocks[idx * b..(idx + 1) * b]
    }

    /// Dense `2N·dim` square section of the multiplication operator.
    pub fn section(&self) -> KMatrix {
        let d = self.dim;
        let n = self.trunc as i64;
        let size = 2 * self.trunc * d;
        KMatrix::from_fn(size, size, |r, c| {
            let (m, a) = ((r / d) as i64 - n, r % d);
            let (k, b) = ((c / d) as i64 - n, c % d);
            self.block(m - k)[a * d + b]
        })
    }
}
