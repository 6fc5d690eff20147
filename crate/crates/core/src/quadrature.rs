//! Direct line quadrature, kept independent of the basis machinery so it can
//! serve as a cross-check.
//!
//! The rule is composite Gauss–Legendre on `[-L, L]`: uniform panels near the
//! origin, geometrically growing panels further out. The contribution beyond
//! `±L` is estimated from the even part of the integrand, fitted as
//! `h₂/x² + h₄/x⁴` at `x = L` and `x = 2L`; the odd part integrates to zero.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const CORE_HALF_WIDTH: f64 = 8.0;
const CORE_PANEL: f64 = 0.2;
const GROWTH: f64 = 1.25;
const NODES_PER_PANEL: usize = 20;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on Pₙ
        let mut r = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, r);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * r * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (r * p - p0) / (r * r - 1.0);
            let step = p / dp;
            r -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -r;
        x[n - 1 - i] = r;
        w[i] = 2.0 / ((1.0 - r * r) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Oracle parameters: truncation half-width `L` and the relative tail tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub half_width: f64,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            half_width: 1e4,
            tolerance: 1e-9,
        }
    }
}

/// Composite rule on `[-L, L]`.
#[derive(Clone, Debug)]
pub struct LineRule {
    pub half_width: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineRule {
    pub fn new(half_width: f64) -> Result<Self> {
        if !(half_width > CORE_HALF_WIDTH) {
            return Err(Error::domain(format!(
                "quadrature half-width must exceed {CORE_HALF_WIDTH}, got {half_width}"
            )));
        }
        let mut edges = Vec::new();
        let core = (2.0 * CORE_HALF_WIDTH / CORE_PANEL).round() as usize;
        for j in 0..=core {
            edges.push(-CORE_HALF_WIDTH + j as f64 * CORE_PANEL);
        }
        let mut outer = vec![];
        let mut a = CORE_HALF_WIDTH;
        while a < half_width {
            a = (a * GROWTH).min(half_width);
            outer.push(a);
        }
        let mut all: Vec<f64> = outer.iter().rev().map(|x| -x).collect();
        all.extend(edges);
        all.extend(outer);

        let (gx, gw) = gauss_legendre(NODES_PER_PANEL);
        let mut nodes = Vec::with_capacity(all.len() * NODES_PER_PANEL);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in all.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self {
            half_width,
            nodes,
            weights,
        })
    }
}

struct Integral {
    value: Vec<Complex64>,
    tail_error: f64,
}

fn integrate(rule: &LineRule, dim: usize, h: &dyn Fn(f64) -> Vec<Complex64>) -> Integral {
    let mut value = vec![Complex64::new(0.0, 0.0); dim];
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        for (v, hx) in value.iter_mut().zip(h(*x)) {
            *v += hx * *w;
        }
    }
    let l = rule.half_width;
    let even = |x: f64| -> Vec<Complex64> {
        h(x).into_iter()
            .zip(h(-x))
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    };
    let (e1, e2) = (even(l), even(2.0 * l));
    let mut tail_error = 0.0_f64;
    for d in 0..dim {
        // e1 = h2/L² + h4/L⁴, e2 = h2/(4L²) + h4/(16L⁴)
        let h4 = (e1[d] - 4.0 * e2[d]) * (4.0 / 3.0) * l.powi(4);
        let h2 = (e1[d] - h4 / l.powi(4)) * l * l;
        let last = h4 * (2.0 / (3.0 * l.powi(3)));
        value[d] += h2 * (2.0 / l) + last;
        tail_error = tail_error.hypot(last.norm());
    }
    Integral { value, tail_error }
}

fn tail_check(estimate: f64, scale: f64, cfg: &OracleConfig) -> Result<()> {
    let tolerance = cfg.tolerance * scale.max(f64::MIN_POSITIVE);
    if estimate > tolerance {
        let required_l = cfg.half_width * (estimate / tolerance).cbrt();
        return Err(Error::TailBound {
            estimate,
            tolerance,
            required_l,
        });
    }
    Ok(())
}

/// `∫ ‖g(λ)‖² dλ` by direct quadrature.
pub fn l2_norm_sqr_oracle(g: impl Fn(f64) -> Vec<Complex64>, cfg: &OracleConfig) -> Result<f64> {
    let rule = LineRule::new(cfg.half_width)?;
    let h = |x: f64| vec![Complex64::new(g(x).iter().map(|c| c.norm_sqr()).sum(), 0.0)];
    let r = integrate(&rule, 1, &h);
    let value = r.value[0].re;
    tail_check(r.tail_error, value, cfg)?;
    Ok(value)
}

/// `(2πi)⁻¹ ∫ g(λ)/(λ − z) dλ`: `(Q₊g)(z)` for `Im z > 0`, `-(Q₋g)(z)` for `Im z < 0`.
///
/// The tail tolerance is relative to the Cauchy–Schwarz bound
/// `‖g‖ (π/|Im z|)^{1/2} / 2π` on the integral.
pub fn cauchy_project_oracle(
    g: impl Fn(f64) -> Vec<Complex64>,
    dim: usize,
    z: Complex64,
    cfg: &OracleConfig,
) -> Result<Vec<Complex64>> {
    if z.im == 0.0 || !z.im.is_finite() {
        return Err(Error::domain(format!(
            "Cauchy oracle needs Im z != 0, got {z}"
        )));
    }
    let rule = LineRule::new(cfg.half_width)?;
    let pre = 1.0 / (2.0 * PI * Complex64::new(0.0, 1.0));
    let h = |x: f64| -> Vec<Complex64> {
        let k = pre / (x - z);
        g(x).into_iter().map(|v| v * k).collect()
    };
    let r = integrate(&rule, dim, &h);
    let norm_sqr: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| w * g(*x).iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum();
    let scale = norm_sqr.sqrt() * (PI / z.im.abs()).sqrt() / (2.0 * PI);
    tail_check(r.tail_error, scale, cfg)?;
    Ok(r.value)
}
