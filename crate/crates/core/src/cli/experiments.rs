//! The eight experiment kinds a scenario can request.
//!
//! Each experiment returns an [`Outcome`]: named pass conditions plus the
//! numbers they were decided on. Quantities that must be small go into
//! `residuals`, quantities that must be large into `witnesses`; which one a
//! structural quantity lands in follows the verdict of the scenario.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hardy::{evaluate_upper, HardySign, SpectralFunction};
use crate::lp_semigroup::{
    lp_semigroup_apply, pole_correspondence_with, prop9_sufficiency_check, resonance_apply,
    resonance_directions, resonance_projector, semigroup_defect, survival_test,
};
use crate::lp_system::{
    asymptotic_equivalence_profile, check_commutation, check_isometry_equivalences,
    projection_identity_residual, theorem1_decompose, CommutationReport, CommutationVerdict,
    LPSystem,
};
use crate::probes::{random_probes, realize_all, smooth_probes, ProbeEnvelope};
use crate::quadrature::{cauchy_project_oracle, l2_norm_sqr_oracle, OracleConfig};
use crate::semigroups::{
    characteristic_adjoint_apply, characteristic_apply, decay_profile, make_reproducing,
};
use crate::tolerances::Tolerances;

/// Residuals below this are treated as converged in convergence sweeps; it
/// is the relative tolerance of the quadrature oracle.
pub const CONVERGENCE_FLOOR: f64 = 1e-9;

/// Allowed growth between consecutive truncations before a sweep is flagged.
pub const CONVERGENCE_SLACK: f64 = 2.0;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pt(p: [f64; 2]) -> Complex64 {
    c(p[0], p[1])
}

/// Per-kind seed so results do not depend on experiment order or filters.
pub(crate) fn sub_seed(seed: u64, salt: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub checks: BTreeMap<String, bool>,
    pub residuals: BTreeMap<String, f64>,
    pub witnesses: BTreeMap<String, f64>,
    pub diagnostics: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, String>,
    pub ranks: BTreeMap<String, usize>,
    pub details: Value,
}

impl Outcome {
    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.into(), ok);
    }

    fn residual(&mut self, name: &str, v: f64) {
        self.residuals.insert(name.into(), v);
    }

    fn witness(&mut self, name: &str, v: f64) {
        self.witnesses.insert(name.into(), v);
    }

    fn diagnostic(&mut self, name: &str, v: f64) {
        self.diagnostics.insert(name.into(), v);
    }

    fn verdict(&mut self, name: &str, v: impl Serialize) {
        let s = match serde_json::to_value(v) {
            Ok(Value::String(s)) => s,
            Ok(other) => other.to_string(),
            Err(e) => e.to_string(),
        };
        self.verdicts.insert(name.into(), s);
    }

    fn detail(&mut self, name: &str, v: impl Serialize) {
        if !self.details.is_object() {
            self.details = json!({});
        }
        self.details[name] = serde_json::to_value(v).unwrap_or(Value::Null);
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }
}

fn default_probe_count() -> usize {
    16
}

fn std_probes(seed: u64, count: usize, dim: usize, trunc: usize) -> Vec<SpectralFunction> {
    realize_all(
        &random_probes(seed, count, dim, None, &ProbeEnvelope::default()),
        trunc,
    )
}

fn plus_probes(seed: u64, count: usize, dim: usize, trunc: usize) -> Vec<SpectralFunction> {
    realize_all(
        &random_probes(
            seed,
            count,
            dim,
            Some(HardySign::Plus),
            &ProbeEnvelope::default(),
        ),
        trunc,
    )
}

fn unit(dim: usize, j: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|i| c(if i == j { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

/// `1/(λ + i)` along the first coordinate.
pub fn witness_probe(dim: usize, trunc: usize) -> Result<SpectralFunction> {
    make_reproducing(c(0.0, -1.0), &unit(dim, 0), trunc)
}

/// Coordinate vectors, plus their normalized sum when `dim > 1`.
fn test_directions(dim: usize) -> Vec<Vec<Complex64>> {
    let mut out: Vec<_> = (0..dim).map(|j| unit(dim, j)).collect();
    if dim > 1 {
        let s = 1.0 / (dim as f64).sqrt();
        out.push(vec![c(s, 0.0); dim]);
    }
    out
}

fn vnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn commutation(sys: &LPSystem, seed: u64, count: usize) -> Result<CommutationReport> {
    check_commutation(sys, &std_probes(seed, count, sys.dim(), sys.trunc()))
}

fn record_commutation(out: &mut Outcome, rep: &CommutationReport) {
    out.verdict("commutation", rep.verdict);
    match rep.verdict {
        CommutationVerdict::Commuting => out.residual("commutation", rep.residual),
        CommutationVerdict::NonCommuting => out.witness("commutation", rep.residual),
    }
}

fn expect<T: PartialEq + Serialize>(out: &mut Outcome, name: &str, expected: Option<T>, found: T) {
    if let Some(e) = expected {
        out.check(&format!("expected_{name}"), e == found);
    }
}

// ---------------------------------------------------------------- projections

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionsParams {
    /// Rational test functions compared against the quadrature oracle.
    pub functions: usize,
    /// Upper half-plane points where `(Q₊f)(z)` is compared.
    pub points: Vec<[f64; 2]>,
    /// Side of the `(ζ, g)` grid for the boundary-value formula.
    pub reproducing_grid: usize,
    /// Smallest pole distance from the axis in the function suite.
    pub min_pole_im: f64,
    /// Largest `|Re|` of a pole in the function suite.
    pub max_pole_re: f64,
}

impl Default for ProjectionsParams {
    fn default() -> Self {
        Self {
            functions: 20,
            points: vec![[0.0, 1.0], [1.5, 0.5], [-2.0, 2.0]],
            reproducing_grid: 5,
            min_pole_im: 0.3,
            max_pole_re: 3.0,
        }
    }
}

/// Residual scale for `(Q₊g)(z)`: the value itself, but never below the
/// point-evaluation bound `‖g‖/(4π Im z)^{1/2}` so near-zero values do not
/// inflate the relative error.
fn evaluation_scale(value: f64, norm: f64, z: Complex64) -> f64 {
    value.max(norm / (4.0 * PI * z.im).sqrt())
}

pub(crate) fn projection_metrics(
    trunc: usize,
    dim: usize,
    seed: u64,
    p: &ProjectionsParams,
) -> Result<BTreeMap<&'static str, f64>> {
    if p.min_pole_im < 0.25 {
        return Err(Error::Config(
            "projections.min_pole_im must be at least 0.25".into(),
        ));
    }
    for z in &p.points {
        if !(z[1] > 0.0) {
            return Err(Error::Config(format!(
                "projections point {z:?} is not in the upper half-plane"
            )));
        }
    }
    let env = ProbeEnvelope {
        min_im: p.min_pole_im,
        max_re: p.max_pole_re,
        ..ProbeEnvelope::default()
    };
    let suite = random_probes(seed, p.functions, dim, None, &env);
    let cfg = OracleConfig::default();
    let rows: Vec<(f64, f64)> = suite
        .par_iter()
        .map(|probe| {
            let f = probe.realize(trunc);
            let g = |x: f64| probe.value(c(x, 0.0));
            let integral = l2_norm_sqr_oracle(g, &cfg)?;
            let mut worst: f64 = 0.0;
            for &z in &p.points {
                let z = pt(z);
                let a = evaluate_upper(&f, z)?;
                let b = cauchy_project_oracle(g, dim, z, &cfg)?;
                let d: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                worst = worst.max(vnorm(&d) / evaluation_scale(vnorm(&b), integral.sqrt(), z));
            }
            Ok((worst, (f.norm_sqr() - integral).abs() / integral))
        })
        .collect::<Result<_>>()?;
    let oracle = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let parseval = rows.iter().map(|r| r.1).fold(0.0, f64::max);

    // ⟨f_{ζ̄,k}, g⟩ = 2πi (k, g(ζ)) on a (ζ, g) grid
    let m = p.reproducing_grid;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let zetas: Vec<Complex64> = (0..m)
        .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(0.3..2.0)))
        .collect();
    let gs = random_probes(seed.wrapping_add(1), m, dim, Some(HardySign::Plus), &env);
    let ks: Vec<Vec<Complex64>> = (0..m)
        .map(|_| {
            (0..dim)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let mut reproducing: f64 = 0.0;
    for (zeta, k) in zetas.iter().zip(&ks) {
        let fk = make_reproducing(zeta.conj(), k, trunc)?;
        for g in &gs {
            let gf = g.realize(trunc);
            let lhs = fk.inner(&gf);
            let gz = g.value(*zeta);
            let rhs: Complex64 = c(0.0, 2.0 * PI)
                * k.iter()
                    .zip(&gz)
                    .map(|(a, b)| a.conj() * b)
                    .sum::<Complex64>();
            reproducing = reproducing.max((lhs - rhs).norm() / (gf.norm() * vnorm(k)));
        }
    }
    Ok(BTreeMap::from([
        ("oracle_relative_error", oracle),
        ("parseval", parseval),
        ("reproducing_formula", reproducing),
    ]))
}

pub(crate) fn projections(
    sys_trunc: usize,
    dim: usize,
    seed: u64,
    p: &ProjectionsParams,
    tol_identity: f64,
) -> Result<Outcome> {
    let m = projection_metrics(sys_trunc, dim, seed, p)?;
    let mut out = Outcome::default();
    for (k, v) in &m {
        out.residual(k, *v);
    }
    out.check("oracle_relative_error", m["oracle_relative_error"] <= 1e-6);
    out.check("parseval", m["parseval"] <= tol_identity);
    out.check(
        "reproducing_formula",
        m["reproducing_formula"] <= tol_identity,
    );
    Ok(out)
}

// ------------------------------------------------------------------ semigroup

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemigroupParams {
    /// Eigenvalues checked against `T₊(t) f_{ζ,k} = e^{-itζ} f_{ζ,k}`.
    pub zetas: Vec<[f64; 2]>,
    pub times: Vec<f64>,
    pub probes: usize,
    /// Times of the decay ladder `t ↦ ‖T₊(t) f‖`.
    pub ladder: Vec<f64>,
    /// Decay order of the probes used for the adjoint isometry.
    pub smooth_order: usize,
}

impl Default for SemigroupParams {
    fn default() -> Self {
        Self {
            zetas: vec![[0.0, -1.0], [0.0, -2.0], [1.0, -1.0], [-1.0, -0.5]],
            times: vec![0.5, 1.0, 2.0, 4.0],
            probes: 8,
            ladder: vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0],
            smooth_order: 5,
        }
    }
}

pub(crate) fn semigroup_metrics(
    trunc: usize,
    dim: usize,
    seed: u64,
    p: &SemigroupParams,
) -> Result<(BTreeMap<&'static str, f64>, bool, f64)> {
    let k = vec![c(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let mut eigen: f64 = 0.0;
    for &z in &p.zetas {
        let zeta = pt(z);
        let f = make_reproducing(zeta, &k, trunc)?;
        for &t in &p.times {
            let g = characteristic_apply(&f, t)?;
            let expect = f.scale((-Complex64::i() * t * zeta).exp());
            eigen = eigen.max((&g - &expect).norm() / f.norm());
        }
    }
    let probes = plus_probes(seed, p.probes, dim, trunc);
    let mut contraction: f64 = 0.0;
    let mut t0: f64 = 0.0;
    let mut ladder_ok = true;
    for f in &probes {
        for &t in &p.times {
            let g = characteristic_apply(f, t)?;
            contraction = contraction.max(g.norm() / f.norm() - 1.0);
        }
        t0 = t0.max(
            (&characteristic_apply(f, 0.0)? - &f.hardy_project(HardySign::Plus)).norm() / f.norm(),
        );
        let ladder = decay_profile(f, &p.ladder)?;
        ladder_ok &= ladder.windows(2).all(|w| w[1] < w[0]);
    }
    let smooth = realize_all(
        &smooth_probes(seed.wrapping_add(7), p.probes, dim, p.smooth_order),
        trunc,
    );
    let mut isometry: f64 = 0.0;
    let mut discarded: f64 = 0.0;
    for f in &smooth {
        for &t in &p.times {
            let e = characteristic_adjoint_apply(f, t)?;
            isometry = isometry.max((e.function.norm() - f.norm()).abs() / f.norm());
            discarded = discarded.max(e.discarded / f.norm());
        }
    }
    Ok((
        BTreeMap::from([
            ("eigen_relation", eigen),
            ("contraction_excess", contraction.max(0.0)),
            ("adjoint_isometry", isometry),
            ("t0_identity", t0),
        ]),
        ladder_ok,
        discarded,
    ))
}

pub(crate) fn semigroup(
    trunc: usize,
    dim: usize,
    seed: u64,
    p: &SemigroupParams,
    tol: &Tolerances,
) -> Result<Outcome> {
    let (m, ladder_ok, discarded) = semigroup_metrics(trunc, dim, seed, p)?;
    let mut out = Outcome::default();
    for (k, v) in &m {
        out.residual(k, *v);
    }
    out.diagnostic("adjoint_discarded", discarded);
    out.check("eigen_relation", m["eigen_relation"] <= tol.semigroup);
    out.check("contraction", m["contraction_excess"] <= 1e-9);
    out.check("adjoint_isometry", m["adjoint_isometry"] <= tol.identity);
    out.check("t0_identity", m["t0_identity"] == 0.0);
    out.check("decay_ladder_strictly_decreasing", ladder_ok);
    out.verdict(
        "decay_ladder",
        if ladder_ok {
            "strictly_decreasing"
        } else {
            "not_strictly_decreasing"
        },
    );
    Ok(out)
}

// ------------------------------------------------------------- identification

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentificationParams {
    pub probes: usize,
    /// Times of the asymptotic-equivalence profile, mirrored to negative times.
    pub profile_times: Vec<f64>,
    pub expect_isometric: Option<bool>,
}

impl Default for IdentificationParams {
    fn default() -> Self {
        Self {
            probes: default_probe_count(),
            profile_times: vec![0.0, 1.0, 2.0, 4.0, 8.0],
            expect_isometric: None,
        }
    }
}

pub(crate) fn identification(
    sys: &LPSystem,
    seed: u64,
    p: &IdentificationParams,
) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut probes = std_probes(seed, p.probes, sys.dim(), sys.trunc());
    let witness = witness_probe(sys.dim(), sys.trunc())?;
    probes.push(witness.clone());
    let tol = sys.tolerances();

    let identity = projection_identity_residual(sys, &probes)?;
    out.residual("projection_identity", identity);
    out.check("projection_identity", identity <= tol.identity);

    match check_isometry_equivalences(sys, &probes) {
        Ok(rep) => {
            out.verdict("isometric", rep.isometric);
            for (name, v) in [
                ("gram_defect", rep.gram),
                ("d_plus_d_minus", rep.orthogonality),
                ("hankel_q_minus_s_q_plus", rep.hankel),
            ] {
                if rep.isometric {
                    out.residual(name, v);
                } else {
                    out.witness(name, v);
                }
            }
            out.check("isometry_equivalences_agree", true);
            if !rep.isometric {
                out.check("gram_defect_witness", rep.gram >= tol.non_commuting);
            }
            expect(&mut out, "isometric", p.expect_isometric, rep.isometric);
        }
        Err(Error::MixedEquivalence {
            gram,
            orthogonality,
            hankel,
        }) => {
            out.verdict("isometric", "mixed");
            out.diagnostic("gram_defect", gram);
            out.diagnostic("d_plus_d_minus", orthogonality);
            out.diagnostic("hankel_q_minus_s_q_plus", hankel);
            out.check("isometry_equivalences_agree", false);
        }
        Err(e) => return Err(e),
    }

    // asymptotic equivalence: the defect decays in |t| on both sides
    let forward: Vec<f64> = p.profile_times.clone();
    let backward: Vec<f64> = p.profile_times.iter().map(|t| -t).collect();
    let mut decreasing = true;
    let mut profile = vec![];
    let f0 = witness.norm();
    for times in [&forward, &backward] {
        let pts = asymptotic_equivalence_profile(sys, &witness, times)?;
        for w in pts.windows(2) {
            decreasing &= w[1].norm <= w[0].norm + w[1].discarded + 1e-12 * f0;
        }
        profile.extend(pts);
    }
    let first = profile.first().map(|p| p.norm / f0).unwrap_or(0.0);
    let far = profile
        .iter()
        .filter(|q| q.t.abs() == p.profile_times.iter().cloned().fold(0.0, f64::max))
        .map(|q| q.norm / f0)
        .fold(0.0, f64::max);
    out.diagnostic("profile_at_zero", first);
    out.diagnostic("profile_at_max_time", far);
    out.check("asymptotic_profile_decreasing", decreasing);
    out.detail("profile", &profile);
    Ok(out)
}

// ------------------------------------------------------------------- projection algebra

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionAlgebraParams {
    pub probes: usize,
    pub expect_commuting: Option<bool>,
    /// Expected `(rank E, rank F)`.
    pub expect_ranks: Option<[usize; 2]>,
}

impl Default for ProjectionAlgebraParams {
    fn default() -> Self {
        Self {
            probes: default_probe_count(),
            expect_commuting: None,
            expect_ranks: None,
        }
    }
}

pub(crate) fn projection_algebra(
    sys: &LPSystem,
    seed: u64,
    p: &ProjectionAlgebraParams,
) -> Result<Outcome> {
    let mut out = Outcome::default();
    let rep = commutation(sys, seed, p.probes)?;
    record_commutation(&mut out, &rep);
    let commuting = rep.verdict == CommutationVerdict::Commuting;
    expect(&mut out, "commuting", p.expect_commuting, commuting);
    if !commuting {
        out.verdict("decomposition", "not_applicable");
        return Ok(out);
    }
    let alg = theorem1_decompose(sys, &rep)?;
    let r = &alg.residuals;
    for (name, v) in [
        ("e_idempotent", r.e_idempotent),
        ("f_idempotent", r.f_idempotent),
        ("e_hermitian", r.e_hermitian),
        ("f_hermitian", r.f_hermitian),
        ("ef", r.ef),
        ("p_idempotent", r.p_idempotent),
        ("spectrum", r.spectrum),
        ("aaa", r.aaa),
        ("b_idempotent", r.b_idempotent),
    ] {
        out.residual(name, v);
    }
    out.check("algebra", r.max() <= sys.tolerances().projector);
    out.ranks.insert("rank_e".into(), alg.rank_e);
    out.ranks.insert("rank_f".into(), alg.rank_f);
    out.check("rank_dichotomy", (alg.rank_e == 0) == (alg.rank_f == 0));
    expect(&mut out, "ranks", p.expect_ranks, [alg.rank_e, alg.rank_f]);
    out.verdict("decomposition", "decomposed");
    out.detail("nonzero_spectrum", &alg.nonzero_spectrum);
    Ok(out)
}

// --------------------------------------------------------------- lp_semigroup

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LpSemigroupParams {
    pub probes: usize,
    pub time_pairs: Vec<[f64; 2]>,
    pub expect_commuting: Option<bool>,
}

impl Default for LpSemigroupParams {
    fn default() -> Self {
        Self {
            probes: 8,
            time_pairs: vec![[0.5, 0.7], [1.0, 2.0]],
            expect_commuting: None,
        }
    }
}

fn pair_name(prefix: &str, t: [f64; 2]) -> String {
    format!("{prefix}_t{}_{}", t[0], t[1])
}

pub(crate) fn lp_semigroup(sys: &LPSystem, seed: u64, p: &LpSemigroupParams) -> Result<Outcome> {
    let mut out = Outcome::default();
    let tol = sys.tolerances();
    let rep = commutation(sys, seed, default_probe_count())?;
    record_commutation(&mut out, &rep);
    let commuting = rep.verdict == CommutationVerdict::Commuting;
    expect(&mut out, "commuting", p.expect_commuting, commuting);

    let witness = witness_probe(sys.dim(), sys.trunc())?;
    let mut probes = plus_probes(seed.wrapping_add(3), p.probes, sys.dim(), sys.trunc());
    probes.push(witness.clone());
    for &pair in &p.time_pairs {
        let chk = semigroup_defect(sys, &probes, pair[0], pair[1])?;
        let name = pair_name("semigroup", pair);
        let wit = semigroup_defect(sys, std::slice::from_ref(&witness), pair[0], pair[1])?;
        out.diagnostic(&pair_name("witness_probe", pair), wit.residual);
        out.diagnostic(
            &pair_name("semigroup_vs_input", pair),
            chk.residual_vs_input,
        );
        if commuting {
            out.residual(&name, chk.residual);
            out.check(&name, chk.residual <= tol.semigroup);
        } else {
            out.witness(&name, chk.residual);
            out.check(&name, chk.residual >= tol.non_commuting);
        }
        let verdict = if chk.residual <= tol.semigroup {
            "holds"
        } else if chk.residual >= tol.non_commuting {
            "violated"
        } else {
            "inconclusive"
        };
        out.verdict(&name, verdict);
    }

    if commuting {
        // Z₊(t) vanishes on the complement of range(R)
        let mut worst: f64 = 0.0;
        for f in &probes {
            let comp = f - &resonance_apply(sys, f)?;
            for t in [0.0, 1.0] {
                worst = worst.max(lp_semigroup_apply(sys, &comp, t)?.norm() / f.norm());
            }
        }
        out.residual("vanishes_on_complement", worst);
        out.check("vanishes_on_complement", worst <= tol.identity);
    }
    Ok(out)
}

// -------------------------------------------------------------- survival_scan

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurvivalScanParams {
    /// Points away from every resonance; none may survive in inner scenarios.
    pub decoys: Vec<[f64; 2]>,
    /// Extra candidates, reported without expectations.
    pub zetas: Vec<[f64; 2]>,
    /// Run the continuation and Paley–Wiener check on each candidate.
    pub sufficiency: bool,
}

impl Default for SurvivalScanParams {
    fn default() -> Self {
        Self {
            decoys: vec![
                [0.0, -0.5],
                [0.0, -1.6],
                [1.5, -1.0],
                [-1.5, -1.0],
                [0.5, -3.0],
                [-2.5, -0.7],
                [3.0, -1.5],
            ],
            zetas: vec![],
            sufficiency: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct ScanRow {
    role: &'static str,
    zeta: Complex64,
    k: Vec<Complex64>,
    residual: f64,
    survives: bool,
    uniform_violations: Option<usize>,
    distance_violations: Option<usize>,
    continuation_hypothesis: Option<bool>,
    sufficiency_consistent: Option<bool>,
    paley_wiener_within: Option<bool>,
}

pub(crate) fn survival_scan(sys: &LPSystem, p: &SurvivalScanParams) -> Result<Outcome> {
    let mut out = Outcome::default();
    let tol = sys.tolerances();
    let s = sys.scattering();
    let inner = s.is_inner();
    let rational = s.is_rational();

    let mut candidates: Vec<(&'static str, Complex64, Vec<Complex64>)> = vec![];
    if inner {
        for (zeta, _) in crate::scattering::pole_set(s)?.lower {
            for k in resonance_directions(sys, zeta)? {
                candidates.push(("resonance", zeta, k));
            }
        }
    }
    for (role, list) in [("decoy", &p.decoys), ("extra", &p.zetas)] {
        for &z in list {
            for k in test_directions(sys.dim()) {
                candidates.push((role, pt(z), k));
            }
        }
    }

    let rows: Vec<ScanRow> = candidates
        .par_iter()
        .map(|(role, zeta, k)| {
            let v = survival_test(sys, *zeta, k)?;
            let mut row = ScanRow {
                role,
                zeta: *zeta,
                k: k.clone(),
                residual: v.residual,
                survives: v.survives,
                uniform_violations: v.bound_checks.as_ref().map(|b| b.uniform_violations),
                distance_violations: v.bound_checks.as_ref().map(|b| b.distance_violations),
                continuation_hypothesis: None,
                sufficiency_consistent: None,
                paley_wiener_within: None,
            };
            if p.sufficiency && rational {
                let r = prop9_sufficiency_check(sys, *zeta, k)?;
                row.continuation_hypothesis = Some(r.hypothesis_holds);
                row.sufficiency_consistent = Some(r.consistent);
                if r.hypothesis_holds {
                    row.paley_wiener_within = Some(r.paley_wiener.iter().all(|w| w.within));
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let survivors: Vec<&ScanRow> = rows.iter().filter(|r| r.survives).collect();
    let resonances: Vec<&ScanRow> = rows.iter().filter(|r| r.role == "resonance").collect();
    let decoys: Vec<&ScanRow> = rows.iter().filter(|r| r.role == "decoy").collect();
    let max_resonance = resonances.iter().map(|r| r.residual).fold(0.0, f64::max);
    let min_decoy = decoys
        .iter()
        .map(|r| r.residual)
        .fold(f64::INFINITY, f64::min);

    out.ranks
        .insert("surviving_candidates".into(), survivors.len());
    if !resonances.is_empty() {
        out.residual("resonance_survival", max_resonance);
        out.check("resonances_survive", resonances.iter().all(|r| r.survives));
    }
    if min_decoy.is_finite() {
        out.witness("decoy_min_survival", min_decoy);
        if inner {
            out.check("decoys_do_not_survive", min_decoy >= 10.0 * tol.survival);
        }
        if !resonances.is_empty() {
            out.witness("separation", min_decoy / max_resonance.max(1e-300));
            out.check("separation", min_decoy >= 10.0 * max_resonance);
        }
    }
    let violations: usize = survivors
        .iter()
        .map(|r| r.uniform_violations.unwrap_or(0) + r.distance_violations.unwrap_or(0))
        .sum();
    out.ranks.insert("bound_violations".into(), violations);
    out.check("bounds_hold_on_survivors", violations == 0);
    if p.sufficiency && rational {
        out.check(
            "sufficiency_consistent",
            rows.iter()
                .all(|r| r.sufficiency_consistent.unwrap_or(true)),
        );
        out.check(
            "paley_wiener_within",
            rows.iter().all(|r| r.paley_wiener_within.unwrap_or(true)),
        );
        out.ranks.insert(
            "continuation_hypothesis_holds".into(),
            rows.iter()
                .filter(|r| r.continuation_hypothesis == Some(true))
                .count(),
        );
    }
    out.detail("candidates", &rows);
    Ok(out)
}

// -------------------------------------------------------- pole_correspondence

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoleCorrespondenceParams {
    pub probes: usize,
    pub expect_rank: Option<usize>,
}

impl Default for PoleCorrespondenceParams {
    fn default() -> Self {
        Self {
            probes: default_probe_count(),
            expect_rank: None,
        }
    }
}

pub(crate) fn pole_correspondence(
    sys: &LPSystem,
    seed: u64,
    p: &PoleCorrespondenceParams,
) -> Result<Outcome> {
    let mut out = Outcome::default();
    let tol = sys.tolerances();
    let rep = commutation(sys, seed, p.probes)?;
    record_commutation(&mut out, &rep);
    let sub = resonance_projector(sys, &rep)?;
    out.residual("projector_idempotent", sub.idempotent);
    out.residual("projector_hermitian", sub.hermitian);
    out.residual("basis_orthogonal_to_s_h2_plus", sub.orthogonality);
    out.check(
        "projector",
        sub.idempotent.max(sub.hermitian) <= tol.projector,
    );
    out.check(
        "basis_orthogonal_to_s_h2_plus",
        sub.orthogonality <= tol.projector,
    );
    let pc = pole_correspondence_with(sys, &sub)?;
    let degree = sys.scattering().inner_degree();
    out.ranks.insert("resonance_rank".into(), pc.resonance_rank);
    out.ranks
        .insert("total_multiplicity".into(), pc.total_multiplicity);
    out.ranks.insert("blaschke_degree".into(), degree);
    out.check("rank_equals_degree", pc.resonance_rank == degree);
    out.check("correspondence", pc.consistent);
    expect(&mut out, "rank", p.expect_rank, pc.resonance_rank);
    let eig = pc
        .resonances
        .iter()
        .map(|r| r.eigen_residual)
        .fold(0.0, f64::max);
    let surv = pc
        .resonances
        .iter()
        .map(|r| r.survival_residual)
        .fold(0.0, f64::max);
    out.residual("eigen_relation", eig);
    out.residual("survival", surv);
    out.detail("resonances", &pc.resonances);
    out.detail("spectrum", &sub.spectrum);
    Ok(out)
}

// ---------------------------------------------------------------- convergence

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceParams {
    pub n_list: Vec<usize>,
    /// Pole envelope of the projection suite. Poles far out along the axis
    /// and close to it have slowly decaying coefficients, which makes the
    /// truncation error visible across the sweep.
    pub min_pole_im: f64,
    pub max_pole_re: f64,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        Self {
            n_list: vec![128, 256, 512],
            min_pole_im: 0.25,
            max_pole_re: 6.0,
        }
    }
}

/// Is `series` non-increasing up to [`CONVERGENCE_SLACK`], ignoring values
/// already below [`CONVERGENCE_FLOOR`]?
pub fn monotone_within_slack(series: &[f64]) -> bool {
    series
        .windows(2)
        .all(|w| w[1] <= CONVERGENCE_SLACK * w[0] || w[1] <= CONVERGENCE_FLOOR)
}

pub(crate) fn convergence(dim: usize, seed: u64, p: &ConvergenceParams) -> Result<Outcome> {
    if p.n_list.is_empty() || p.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "convergence.n_list must be nonempty and ascending".into(),
        ));
    }
    let mut series: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let proj = ProjectionsParams {
        min_pole_im: p.min_pole_im,
        max_pole_re: p.max_pole_re,
        ..ProjectionsParams::default()
    };
    let semi = SemigroupParams::default();
    let per_n: Vec<BTreeMap<&'static str, f64>> = p
        .n_list
        .par_iter()
        .map(|&n| {
            let mut m = projection_metrics(n, dim, sub_seed(seed, 1), &proj)?;
            m.extend(semigroup_metrics(n, dim, sub_seed(seed, 2), &semi)?.0);
            Ok(m)
        })
        .collect::<Result<_>>()?;
    for m in &per_n {
        for (k, v) in m {
            series.entry((*k).to_string()).or_default().push(*v);
        }
    }
    let mut out = Outcome::default();
    for (name, vals) in &series {
        for (n, v) in p.n_list.iter().zip(vals) {
            out.residual(&format!("{name}@{n}"), *v);
        }
        out.check(&format!("{name}_monotone"), monotone_within_slack(vals));
    }
    out.detail("n_list", &p.n_list);
    out.detail("series", &series);
    Ok(out)
}
