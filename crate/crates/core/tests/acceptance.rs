//! Acceptance suite: ten criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the verdict table is always printed.
//! Exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use lpscatter::cli::{
    bundled_suite, run_batch, run_convergence, ExperimentKind, ExperimentRecord, RunOptions,
    Scenario, ScenarioReport,
};
use lpscatter::lp_semigroup::resonance_directions;
use lpscatter::lp_system::{asymptotic_equivalence_profile, LPSystem};
use lpscatter::semigroups::make_reproducing;
use num_complex::Complex64;

/// Criteria 1-3 on both multiplicities in scope.
const LOW_LEVEL: &str = r#"
name = "acceptance_low_level"
k_dim = 1
seed = 2024

[scattering]

[[experiments]]
type = "projections"
parameters = { functions = 20, reproducing_grid = 5, min_pole_im = 0.25 }

[[experiments]]
type = "semigroup"
parameters = { zetas = [[0.0, -1.0], [0.0, -2.0], [1.0, -1.0], [-1.0, -0.5]], times = [0.5, 1.0, 2.0, 4.0] }
"#;

struct Verdict {
    pass: bool,
    detail: String,
}

struct Table {
    rows: Vec<(usize, &'static str, Verdict)>,
}

impl Table {
    fn add(&mut self, n: usize, name: &'static str, v: Verdict) {
        println!(
            "criterion {n:>2} {name:<34} {}  {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        self.rows.push((n, name, v));
    }
}

/// Collects named conditions; the first failures end up in the detail line.
#[derive(Default)]
struct Gate {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Gate {
    fn le(&mut self, what: impl Into<String>, value: f64, bound: f64) {
        if !(value <= bound) {
            self.failures
                .push(format!("{} = {value:.3e} > {bound:.0e}", what.into()));
        }
    }

    fn ge(&mut self, what: impl Into<String>, value: f64, bound: f64) {
        if !(value >= bound) {
            self.failures
                .push(format!("{} = {value:.3e} < {bound:.0e}", what.into()));
        }
    }

    fn ok(&mut self, what: impl Into<String>, cond: bool) {
        if !cond {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn verdict(self) -> Verdict {
        let pass = self.failures.is_empty();
        let detail = if pass {
            self.notes.join(", ")
        } else {
            self.failures
                .iter()
                .take(4)
                .cloned()
                .collect::<Vec<_>>()
                .join("; ")
        };
        Verdict { pass, detail }
    }
}

fn record(rep: &ScenarioReport, kind: ExperimentKind) -> &ExperimentRecord {
    rep.record(kind)
        .unwrap_or_else(|| panic!("{} has no {} record", rep.scenario.name, kind.name()))
}

/// A residual or witness by name, whichever the experiment filed it under.
fn value(r: &ExperimentRecord, name: &str) -> f64 {
    let o = &r.outcome;
    o.residuals
        .get(name)
        .or_else(|| o.witnesses.get(name))
        .copied()
        .unwrap_or(f64::NAN)
}

fn check(r: &ExperimentRecord, name: &str) -> bool {
    r.outcome.checks.get(name).copied().unwrap_or(false)
}

fn by_name(reports: &[ScenarioReport]) -> BTreeMap<&str, &ScenarioReport> {
    reports
        .iter()
        .map(|r| (r.scenario.name.as_str(), r))
        .collect()
}

const INNER: [&str; 4] = [
    "inner_single",
    "inner_triple",
    "inner_matrix",
    "constant_unitary",
];
const ANTI: [&str; 2] = ["anti_inner_single", "anti_inner_double"];
const COMMUTING: [&str; 6] = [
    "inner_single",
    "inner_triple",
    "inner_matrix",
    "constant_unitary",
    "anti_inner_single",
    "anti_inner_double",
];

fn low_level_reports() -> Vec<ScenarioReport> {
    let one = Scenario::from_toml(LOW_LEVEL).expect("low-level scenario");
    let mut two = one.clone();
    two.name = "acceptance_low_level_dim2".into();
    two.k_dim = 2;
    run_batch(&[one, two], &RunOptions::default()).expect("low-level run")
}

fn criterion_1(low: &[ScenarioReport]) -> Verdict {
    let mut g = Gate::default();
    for rep in low {
        let r = record(rep, ExperimentKind::Projections);
        let e = value(r, "oracle_relative_error");
        g.le(format!("{} oracle error", rep.scenario.name), e, 1e-6);
        g.note(format!("dim {}: {e:.1e}", rep.scenario.k_dim));
    }
    g.verdict()
}

fn criterion_2(low: &[ScenarioReport]) -> Verdict {
    let mut g = Gate::default();
    for rep in low {
        let r = record(rep, ExperimentKind::Projections);
        let e = value(r, "reproducing_formula");
        g.le(format!("{} reproducing", rep.scenario.name), e, 1e-8);
        g.note(format!("dim {}: {e:.1e}", rep.scenario.k_dim));
    }
    g.verdict()
}

fn criterion_3(low: &[ScenarioReport]) -> Verdict {
    let mut g = Gate::default();
    for rep in low {
        let r = record(rep, ExperimentKind::Semigroup);
        let name = &rep.scenario.name;
        g.le(format!("{name} eigen"), value(r, "eigen_relation"), 1e-6);
        g.le(
            format!("{name} contraction"),
            value(r, "contraction_excess"),
            1e-9,
        );
        g.le(
            format!("{name} adjoint isometry"),
            value(r, "adjoint_isometry"),
            1e-8,
        );
        g.ok(
            format!("{name} decay ladder"),
            check(r, "decay_ladder_strictly_decreasing"),
        );
        g.note(format!(
            "dim {}: eigen {:.1e}, isometry {:.1e}",
            rep.scenario.k_dim,
            value(r, "eigen_relation"),
            value(r, "adjoint_isometry")
        ));
    }
    g.verdict()
}

fn criterion_4(suite: &BTreeMap<&str, &ScenarioReport>) -> Verdict {
    let mut g = Gate::default();
    for name in INNER {
        let r = record(suite[name], ExperimentKind::Identification);
        g.le(format!("{name} gram_defect"), value(r, "gram_defect"), 1e-6);
    }
    for name in ANTI {
        let r = record(suite[name], ExperimentKind::Identification);
        g.ge(
            format!("{name} gram witness"),
            value(r, "gram_defect"),
            1e-2,
        );
    }
    for (name, rep) in suite {
        let r = record(rep, ExperimentKind::Identification);
        g.le(
            format!("{name} projection identity"),
            value(r, "projection_identity"),
            1e-8,
        );
        let three = [
            value(r, "gram_defect"),
            value(r, "d_plus_d_minus"),
            value(r, "hankel_q_minus_s_q_plus"),
        ];
        let small = three.iter().all(|&x| x <= 1e-6);
        let large = three.iter().all(|&x| x >= 1e-2);
        g.ok(
            format!("{name} isometry conditions disagree: {three:?}"),
            small || large,
        );
    }

    // decreasing in |t| beyond t = 1 on the anti-inner fixture, f = 1/(λ+i)
    let sys = system_of(suite["anti_inner_single"]);
    let f = make_reproducing(
        Complex64::new(0.0, -1.0),
        &[Complex64::new(1.0, 0.0)],
        sys.trunc(),
    )
    .expect("reproducing vector");
    for sign in [1.0, -1.0] {
        let times: Vec<f64> = [1.0, 2.0, 4.0, 8.0].iter().map(|t| sign * t).collect();
        let prof = asymptotic_equivalence_profile(&sys, &f, &times).expect("profile");
        let norms: Vec<f64> = prof.iter().map(|p| p.norm).collect();
        g.ok(
            format!("profile not decreasing for sign {sign}: {norms:?}"),
            norms.windows(2).all(|w| w[1] < w[0]),
        );
        if sign > 0.0 {
            g.note(format!(
                "profile t=1..8: {}",
                norms
                    .iter()
                    .map(|x| format!("{x:.3}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
    }
    g.verdict()
}

fn criterion_5(suite: &BTreeMap<&str, &ScenarioReport>) -> Verdict {
    let mut g = Gate::default();
    let expected: BTreeMap<&str, (usize, usize)> = BTreeMap::from([
        ("inner_single", (0, 0)),
        ("inner_triple", (0, 0)),
        ("inner_matrix", (0, 0)),
        ("constant_unitary", (0, 0)),
        ("anti_inner_single", (1, 1)),
        ("anti_inner_double", (2, 2)),
    ]);
    let mut found = vec![];
    for name in COMMUTING {
        let r = record(suite[name], ExperimentKind::Theorem1);
        g.le(format!("{name} spectrum"), value(r, "spectrum"), 1e-6);
        for q in [
            "e_idempotent",
            "f_idempotent",
            "e_hermitian",
            "f_hermitian",
            "ef",
        ] {
            g.le(format!("{name} {q}"), value(r, q), 1e-6);
        }
        let re = r.outcome.ranks.get("rank_e").copied();
        let rf = r.outcome.ranks.get("rank_f").copied();
        g.ok(
            format!("{name} rank dichotomy {re:?}/{rf:?}"),
            matches!((re, rf), (Some(a), Some(b)) if (a == 0) == (b == 0)),
        );
        g.ok(
            format!("{name} ranks {re:?}/{rf:?} != {:?}", expected[name]),
            (re, rf) == (Some(expected[name].0), Some(expected[name].1)),
        );
        found.push(format!("{}/{}", re.unwrap_or(99), rf.unwrap_or(99)));
    }
    g.note(format!("ranks {}", found.join(" ")));
    g.verdict()
}

fn criterion_6(suite: &BTreeMap<&str, &ScenarioReport>) -> Verdict {
    let mut g = Gate::default();
    let pairs = ["semigroup_t0.5_0.7", "semigroup_t1_2"];
    let mut worst: f64 = 0.0;
    for name in COMMUTING {
        let r = record(suite[name], ExperimentKind::LpSemigroup);
        for q in pairs {
            worst = worst.max(value(r, q));
            g.le(format!("{name} {q}"), value(r, q), 1e-6);
        }
    }
    let r = record(suite["smooth_phase"], ExperimentKind::LpSemigroup);
    let w: Vec<f64> = pairs.iter().map(|q| value(r, q)).collect();
    for (q, v) in pairs.iter().zip(&w) {
        g.ge(format!("smooth_phase {q}"), *v, 1e-2);
    }
    g.note(format!(
        "commuting ≤ {worst:.1e}, smooth_phase {:.3} / {:.3}",
        w[0], w[1]
    ));
    g.verdict()
}

fn criterion_7(suite: &BTreeMap<&str, &ScenarioReport>) -> Verdict {
    let mut g = Gate::default();
    let degrees = [
        ("inner_single", 1),
        ("inner_triple", 3),
        ("inner_matrix", 1),
    ];
    for (name, degree) in degrees {
        let rep = suite[name];
        let scan = record(rep, ExperimentKind::SurvivalScan);
        g.le(
            format!("{name} survival"),
            value(scan, "resonance_survival"),
            1e-4,
        );
        g.ge(
            format!("{name} decoy survival"),
            value(scan, "decoy_min_survival"),
            1e-3,
        );
        let pc = record(rep, ExperimentKind::PoleCorrespondence);
        g.le(
            format!("{name} eigen relation"),
            value(pc, "eigen_relation"),
            1e-5,
        );
        let rank = pc.outcome.ranks.get("resonance_rank").copied();
        let deg = pc.outcome.ranks.get("blaschke_degree").copied();
        g.ok(
            format!("{name} rank {rank:?} vs degree {deg:?}"),
            rank == Some(degree) && deg == Some(degree),
        );
        g.ok(
            format!("{name} correspondence"),
            check(pc, "correspondence"),
        );
    }

    // directions at the mirrored zero of the rank-one matrix factor span e₁
    let sys = system_of(suite["inner_matrix"]);
    let dirs = resonance_directions(&sys, Complex64::new(0.0, -1.0)).expect("directions");
    let aligned =
        dirs.len() == 1 && (dirs[0][0].norm() - 1.0).abs() < 1e-10 && dirs[0][1].norm() < 1e-10;
    g.ok(format!("inner_matrix directions {dirs:?}"), aligned);
    g.note("ranks 1/3/1, direction e₁");
    g.verdict()
}

fn criterion_8(suite: &BTreeMap<&str, &ScenarioReport>) -> Verdict {
    let mut g = Gate::default();
    let mut survivors = 0;
    for (name, rep) in suite {
        let r = record(rep, ExperimentKind::SurvivalScan);
        let v = r.outcome.ranks.get("bound_violations").copied();
        g.ok(format!("{name} bound violations {v:?}"), v == Some(0));
        g.ok(
            format!("{name} bounds"),
            check(r, "bounds_hold_on_survivors"),
        );
        if r.outcome.checks.contains_key("paley_wiener_within") {
            g.ok(
                format!("{name} Paley-Wiener"),
                check(r, "paley_wiener_within"),
            );
            g.ok(
                format!("{name} sufficiency"),
                check(r, "sufficiency_consistent"),
            );
        }
        survivors += r
            .outcome
            .ranks
            .get("surviving_candidates")
            .copied()
            .unwrap_or(0);
    }
    g.ok("no surviving (ζ, k) was exercised", survivors > 0);
    g.note(format!("{survivors} surviving pairs, 0 violations"));
    g.verdict()
}

fn criterion_9() -> Verdict {
    let mut g = Gate::default();
    let scenario = Scenario::from_toml(LOW_LEVEL).expect("low-level scenario");
    let table = run_convergence(&scenario, &[128, 256, 512], &RunOptions::default())
        .expect("convergence run");
    g.ok(format!("anomalies {:?}", table.anomalies), table.passed());
    let parseval = table.series("projections[0].residual.parseval");
    g.ok("parseval series missing", parseval.len() == 3);
    g.note(format!(
        "parseval {}",
        parseval
            .iter()
            .map(|x| format!("{x:.1e}"))
            .collect::<Vec<_>>()
            .join(" → ")
    ));
    g.verdict()
}

fn criterion_10(first: &[ScenarioReport]) -> Verdict {
    let mut g = Gate::default();
    let second = run_batch(&bundled_suite().expect("suite"), &RunOptions::default())
        .expect("second suite run");
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for (a, b) in first.iter().zip(&second) {
        let (na, nb) = (a.numbers(), b.numbers());
        g.ok(
            format!("{} key sets differ", a.scenario.name),
            na.keys().eq(nb.keys()),
        );
        for (k, x) in &na {
            if let Some(y) = nb.get(k) {
                let d = if x.is_nan() && y.is_nan() {
                    0.0
                } else {
                    (x - y).abs()
                };
                worst = worst.max(d);
                g.le(format!("{}:{k}", a.scenario.name), d, 1e-10);
                compared += 1;
            }
        }
    }
    g.note(format!("{compared} numbers, max |Δ| = {worst:.1e}"));
    g.verdict()
}

/// The system a report was produced from.
fn system_of(rep: &ScenarioReport) -> LPSystem {
    let s = &rep.scenario;
    let matrix = s.scattering.build(s.k_dim).expect("scattering matrix");
    LPSystem::new(matrix, s.trunc_n, s.grid_factor)
        .expect("system")
        .with_tolerances(s.tolerances)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let low = low_level_reports();
    let suite_reports = run_batch(&bundled_suite().expect("suite"), &RunOptions::default())
        .expect("bundled suite run");
    let suite = by_name(&suite_reports);
    for rep in &suite_reports {
        if !rep.passed {
            println!(
                "note: bundled scenario {} has failing experiments",
                rep.scenario.name
            );
        }
    }

    let mut t = Table { rows: vec![] };
    t.add(1, "Hardy projection oracle", criterion_1(&low));
    t.add(2, "reproducing formula", criterion_2(&low));
    t.add(3, "characteristic semigroup", criterion_3(&low));
    t.add(4, "identification algebra", criterion_4(&suite));
    t.add(5, "projection algebra", criterion_5(&suite));
    t.add(6, "semigroup law contrast", criterion_6(&suite));
    t.add(7, "resonance-pole correspondence", criterion_7(&suite));
    t.add(8, "pointwise and Paley-Wiener bounds", criterion_8(&suite));
    t.add(9, "convergence in N", criterion_9());
    t.add(10, "determinism", criterion_10(&suite_reports));

    let failed: Vec<usize> = t.rows.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        t.rows.len() - failed.len(),
        t.rows.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
