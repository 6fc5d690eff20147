//! Seeded rational test vectors `Σⱼ kⱼ/(λ - pⱼ)` with exact basis coefficients.
//!
//! A pole `p ∈ ℂ₋` contributes to `H²₊` through the geometric expansion of
//! [`ReproducingVector`]. A pole `p ∈ ℂ₊` contributes to `H²₋`: on the axis
//! `conj φₙ = φ_{-n-1}`, so `k/(λ - p)` has the conjugated coefficients of
//! `k̄/(λ - p̄)` moved to index `-n-1`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{HardySign, SpectralFunction};
use crate::semigroups::ReproducingVector;

/// Probe count used by the system-level checks.
pub const DEFAULT_PROBE_COUNT: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub k: Vec<Complex64>,
}

/// `λ ↦ Σ kⱼ/(λ - pⱼ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalProbe {
    pub terms: Vec<PoleTerm>,
}

impl RationalProbe {
    pub fn new(terms: Vec<PoleTerm>) -> Result<Self> {
        let dim = terms.first().map(|t| t.k.len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::domain(
                "probe needs at least one term with nonempty k",
            ));
        }
        for t in &terms {
            if t.k.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: t.k.len(),
                });
            }
            if t.pole.im == 0.0 {
                return Err(Error::domain(format!(
                    "probe pole {} lies on the real axis",
                    t.pole
                )));
            }
        }
        Ok(Self { terms })
    }

    /// `k · Πⱼ (λ - zⱼ)⁻¹` for distinct `zⱼ`, expanded in partial fractions.
    pub fn product(zeros: &[Complex64], k: &[Complex64]) -> Result<Self> {
        let mut terms = Vec::with_capacity(zeros.len());
        for (j, zj) in zeros.iter().enumerate() {
            let mut r = Complex64::new(1.0, 0.0);
            for (i, zi) in zeros.iter().enumerate() {
                if i != j {
                    let d = zj - zi;
                    if d.norm() < 1e-9 {
                        return Err(Error::domain("product probe needs distinct poles"));
                    }
                    r /= d;
                }
            }
            terms.push(PoleTerm {
                pole: *zj,
                k: k.iter().map(|c| c * r).collect(),
            });
        }
        Self::new(terms)
    }

    pub fn dim(&self) -> usize {
        self.terms[0].k.len()
    }

    pub fn value(&self, lambda: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for t in &self.terms {
            let s = 1.0 / (lambda - t.pole);
            for (o, k) in out.iter_mut().zip(&t.k) {
                *o += k * s;
            }
        }
        out
    }

    /// Exact coefficients at truncation `trunc`.
    pub fn realize(&self, trunc: usize) -> SpectralFunction {
        let mut f = SpectralFunction::zeros(self.dim(), trunc);
        for t in &self.terms {
            if t.pole.im < 0.0 {
                let v = ReproducingVector {
                    zeta: t.pole,
                    k: t.k.clone(),
                };
                f.axpy(Complex64::new(1.0, 0.0), &v.realize(trunc));
            } else {
                let mirror = ReproducingVector {
                    zeta: t.pole.conj(),
                    k: t.k.iter().map(|c| c.conj()).collect(),
                }
                .realize(trunc);
                for n in 0..trunc as i64 {
                    let src: Vec<Complex64> = mirror.coeff(n).iter().map(|c| c.conj()).collect();
                    for (o, s) in f.coeff_mut(-n - 1).iter_mut().zip(src) {
                        *o += s;
                    }
                }
            }
        }
        f
    }

    /// Smallest distance from a pole to the real axis.
    pub fn min_pole_distance(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.pole.im.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sampling envelope for random poles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeEnvelope {
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
    pub max_terms: usize,
}

impl Default for ProbeEnvelope {
    fn default() -> Self {
        Self {
            max_re: 3.0,
            min_im: 0.3,
            max_im: 2.0,
            max_terms: 3,
        }
    }
}

fn random_k(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

fn random_pole(rng: &mut ChaCha8Rng, env: &ProbeEnvelope, side: Option<HardySign>) -> Complex64 {
    let re = rng.random_range(-env.max_re..=env.max_re);
    let im = rng.random_range(env.min_im..=env.max_im);
    // Q₊ elements have poles below the axis
    let below = match side {
        Some(HardySign::Plus) => true,
        Some(HardySign::Minus) => false,
        None => rng.random_bool(0.5),
    };
    Complex64::new(re, if below { -im } else { im })
}

/// `count` random rational probes; `side` restricts every pole to one Hardy space.
pub fn random_probes(
    seed: u64,
    count: usize,
    dim: usize,
    side: Option<HardySign>,
    env: &ProbeEnvelope,
) -> Vec<RationalProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.random_range(1..=env.max_terms.max(1));
            let terms = (0..terms)
                .map(|_| PoleTerm {
                    pole: random_pole(&mut rng, env, side),
                    k: random_k(&mut rng, dim),
                })
                .collect();
            RationalProbe { terms }
        })
        .collect()
}

/// Random `H²₊` probes `k · Π (λ - zⱼ)⁻¹` of the given order.
///
/// Decay like `|λ|^{-order}` keeps time-evolved copies inside a finite
/// window; simple-pole probes spread a slowly decaying tail under `e^{±itλ}`.
pub fn smooth_probes(seed: u64, count: usize, dim: usize, order: usize) -> Vec<RationalProbe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let env = ProbeEnvelope {
        max_re: 1.0,
        min_im: 0.5,
        max_im: 1.5,
        max_terms: 1,
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let zeros: Vec<Complex64> = (0..order)
            .map(|_| random_pole(&mut rng, &env, Some(HardySign::Plus)))
            .collect();
        let k = random_k(&mut rng, dim);
        // rejection keeps the partial-fraction residues well conditioned
        if let Ok(p) = RationalProbe::product(&zeros, &k) {
            let spread = zeros
                .iter()
                .enumerate()
                .flat_map(|(i, a)| zeros[i + 1..].iter().map(move |b| (a - b).norm()))
                .fold(f64::INFINITY, f64::min);
            if spread > 0.2 {
                out.push(p);
            }
        }
    }
    out
}

/// Realized coefficients of a probe family.
pub fn realize_all(probes: &[RationalProbe], trunc: usize) -> Vec<SpectralFunction> {
    probes.iter().map(|p| p.realize(trunc)).collect()
}
