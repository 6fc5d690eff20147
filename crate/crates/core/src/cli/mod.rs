//! Scenario-driven batch runs.
//!
//! A scenario is a TOML file naming a scattering matrix, a truncation and a
//! list of experiments; running it yields a versioned JSON
//! [`ScenarioReport`]. Experiment failures are recorded in the report and the
//! run continues; only malformed scenarios abort with [`Error::Config`].
//!
//! ```toml
//! name = "inner_single"
//! k_dim = 1
//! seed = 7
//!
//! [[scattering.factors]]
//! type = "inner"
//! mu = [0.0, 1.0]
//!
//! [[experiments]]
//! type = "theorem1"
//! parameters = { expect_ranks = [0, 0] }
//! ```

pub mod experiments;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{DEFAULT_GRID_FACTOR, DEFAULT_TRUNCATION};
use crate::lp_system::LPSystem;
use crate::scattering::{
    rank_one_projector, BlaschkeFactor, KMatrix, Orientation, ScatteringMatrix, SmoothPhase,
};
use crate::tolerances::Tolerances;

pub use experiments::{
    monotone_within_slack, ConvergenceParams, IdentificationParams, LpSemigroupParams, Outcome,
    PoleCorrespondenceParams, ProjectionAlgebraParams, ProjectionsParams, SemigroupParams,
    SurvivalScanParams, CONVERGENCE_FLOOR, CONVERGENCE_SLACK,
};

/// Version of the report layout; bumped on any incompatible field change.
pub const SCHEMA_VERSION: u32 = 1;

/// Prefix selecting a scenario shipped with the crate instead of a file.
pub const BUNDLED_PREFIX: &str = "bundled:";

const BUNDLED: [(&str, &str); 7] = [
    (
        "inner_single",
        include_str!("../../scenarios/inner_single.toml"),
    ),
    (
        "inner_triple",
        include_str!("../../scenarios/inner_triple.toml"),
    ),
    (
        "inner_matrix",
        include_str!("../../scenarios/inner_matrix.toml"),
    ),
    (
        "constant_unitary",
        include_str!("../../scenarios/constant_unitary.toml"),
    ),
    (
        "anti_inner_single",
        include_str!("../../scenarios/anti_inner_single.toml"),
    ),
    (
        "anti_inner_double",
        include_str!("../../scenarios/anti_inner_double.toml"),
    ),
    (
        "smooth_phase",
        include_str!("../../scenarios/smooth_phase.toml"),
    ),
];

/// Names of the bundled scenarios, in suite order.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// TOML source of a bundled scenario.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Projections,
    Semigroup,
    Identification,
    Theorem1,
    LpSemigroup,
    SurvivalScan,
    PoleCorrespondence,
    Convergence,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Projections,
        ExperimentKind::Semigroup,
        ExperimentKind::Identification,
        ExperimentKind::Theorem1,
        ExperimentKind::LpSemigroup,
        ExperimentKind::SurvivalScan,
        ExperimentKind::PoleCorrespondence,
        ExperimentKind::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Projections => "projections",
            ExperimentKind::Semigroup => "semigroup",
            ExperimentKind::Identification => "identification",
            ExperimentKind::Theorem1 => "theorem1",
            ExperimentKind::LpSemigroup => "lp_semigroup",
            ExperimentKind::SurvivalScan => "survival_scan",
            ExperimentKind::PoleCorrespondence => "pole_correspondence",
            ExperimentKind::Convergence => "convergence",
        }
    }

    fn salt(self) -> u64 {
        self as u64 + 1
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment type `{s}`")))
    }
}

/// `[re, im]` rows of a matrix.
pub type MatrixEntries = Vec<Vec<[f64; 2]>>;

/// Projection of a Blaschke–Potapov factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProjectionSpec {
    /// `"full"`: the identity on `𝒦`.
    Keyword(String),
    /// Rank-one projection onto the span of a vector.
    Range {
        range: Vec<[f64; 2]>,
    },
    Matrix(MatrixEntries),
}

impl Default for ProjectionSpec {
    fn default() -> Self {
        ProjectionSpec::Keyword("full".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    #[serde(rename = "type")]
    pub orientation: Orientation,
    pub mu: [f64; 2],
    #[serde(default)]
    pub proj: ProjectionSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringSpec {
    /// Constant unitary factor; the identity when absent.
    #[serde(default)]
    pub constant: Option<MatrixEntries>,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
    #[serde(default)]
    pub phase: Option<SmoothPhase>,
}

fn matrix(entry: &MatrixEntries, dim: usize, what: &str) -> Result<KMatrix> {
    if entry.len() != dim || entry.iter().any(|r| r.len() != dim) {
        return Err(Error::Config(format!(
            "{what} must be a {dim}x{dim} matrix"
        )));
    }
    Ok(KMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(entry[i][j][0], entry[i][j][1])
    }))
}

impl ScatteringSpec {
    pub fn build(&self, dim: usize) -> Result<ScatteringMatrix> {
        let constant = match &self.constant {
            Some(m) => matrix(m, dim, "scattering.constant")?,
            None => KMatrix::identity(dim, dim),
        };
        let mut factors = Vec::with_capacity(self.factors.len());
        for (i, f) in self.factors.iter().enumerate() {
            let what = format!("scattering.factors[{i}]");
            let proj = match &f.proj {
                ProjectionSpec::Keyword(k) if k == "full" => KMatrix::identity(dim, dim),
                ProjectionSpec::Keyword(k) => {
                    return Err(Error::Config(format!("{what}.proj: unknown keyword `{k}`")))
                }
                ProjectionSpec::Range { range } => {
                    if range.len() != dim {
                        return Err(Error::Config(format!(
                            "{what}.proj.range needs {dim} entries"
                        )));
                    }
                    let v: Vec<Complex64> =
                        range.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                    rank_one_projector(&v).map_err(|e| Error::Config(format!("{what}: {e}")))?
                }
                ProjectionSpec::Matrix(m) => matrix(m, dim, &format!("{what}.proj"))?,
            };
            let mu = Complex64::new(f.mu[0], f.mu[1]);
            factors.push(
                BlaschkeFactor::new(mu, proj, f.orientation)
                    .map_err(|e| Error::Config(format!("{what}: {e}")))?,
            );
        }
        ScatteringMatrix::new(constant, factors, self.phase.clone())
            .map_err(|e| Error::Config(format!("scattering: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentEntry {
    #[serde(rename = "type")]
    pub kind: ExperimentKind,
    #[serde(default)]
    pub parameters: toml::Table,
}

/// An experiment with its parameters resolved against the defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "parameters", rename_all = "snake_case")]
pub enum Experiment {
    Projections(ProjectionsParams),
    Semigroup(SemigroupParams),
    Identification(IdentificationParams),
    Theorem1(ProjectionAlgebraParams),
    LpSemigroup(LpSemigroupParams),
    SurvivalScan(SurvivalScanParams),
    PoleCorrespondence(PoleCorrespondenceParams),
    Convergence(ConvergenceParams),
}

impl Experiment {
    pub fn from_entry(entry: &ExperimentEntry, index: usize) -> Result<Self> {
        fn parse<T: serde::de::DeserializeOwned>(t: &toml::Table, what: &str) -> Result<T> {
            toml::Value::Table(t.clone())
                .try_into()
                .map_err(|e| Error::Config(format!("{what}.parameters: {e}")))
        }
        let what = format!("experiments[{index}] ({})", entry.kind.name());
        let p = &entry.parameters;
        Ok(match entry.kind {
            ExperimentKind::Projections => Experiment::Projections(parse(p, &what)?),
            ExperimentKind::Semigroup => Experiment::Semigroup(parse(p, &what)?),
            ExperimentKind::Identification => Experiment::Identification(parse(p, &what)?),
            ExperimentKind::Theorem1 => Experiment::Theorem1(parse(p, &what)?),
            ExperimentKind::LpSemigroup => Experiment::LpSemigroup(parse(p, &what)?),
            ExperimentKind::SurvivalScan => Experiment::SurvivalScan(parse(p, &what)?),
            ExperimentKind::PoleCorrespondence => Experiment::PoleCorrespondence(parse(p, &what)?),
            ExperimentKind::Convergence => Experiment::Convergence(parse(p, &what)?),
        })
    }

    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::Projections(_) => ExperimentKind::Projections,
            Experiment::Semigroup(_) => ExperimentKind::Semigroup,
            Experiment::Identification(_) => ExperimentKind::Identification,
            Experiment::Theorem1(_) => ExperimentKind::Theorem1,
            Experiment::LpSemigroup(_) => ExperimentKind::LpSemigroup,
            Experiment::SurvivalScan(_) => ExperimentKind::SurvivalScan,
            Experiment::PoleCorrespondence(_) => ExperimentKind::PoleCorrespondence,
            Experiment::Convergence(_) => ExperimentKind::Convergence,
        }
    }
}

fn default_trunc() -> usize {
    DEFAULT_TRUNCATION
}

fn default_grid_factor() -> usize {
    DEFAULT_GRID_FACTOR
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub k_dim: usize,
    #[serde(default = "default_trunc")]
    pub trunc_n: usize,
    #[serde(default = "default_grid_factor")]
    pub grid_factor: usize,
    #[serde(default)]
    pub seed: u64,
    pub scattering: ScatteringSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub experiments: Vec<ExperimentEntry>,
}

impl Scenario {
    /// Parses and validates; every failure is an [`Error::Config`] naming
    /// the offending line or field.
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// `path`, or a bundled scenario when prefixed with `bundled:`.
    pub fn load(source: &str) -> Result<Self> {
        if let Some(name) = source.strip_prefix(BUNDLED_PREFIX) {
            let text = bundled_source(name).ok_or_else(|| {
                Error::Config(format!(
                    "no bundled scenario `{name}` (have: {})",
                    bundled_names().join(", ")
                ))
            })?;
            return Self::from_toml(text);
        }
        let text =
            std::fs::read_to_string(source).map_err(|e| Error::Config(format!("{source}: {e}")))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{source}: {m}")),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_dim == 0 {
            return Err(Error::Config("k_dim must be at least 1".into()));
        }
        if self.trunc_n == 0 {
            return Err(Error::Config("trunc_n must be at least 1".into()));
        }
        self.tolerances
            .validate()
            .map_err(|e| Error::Config(format!("tolerances: {e}")))?;
        self.plan()?;
        self.system()?;
        Ok(())
    }

    pub fn plan(&self) -> Result<Vec<Experiment>> {
        self.experiments
            .iter()
            .enumerate()
            .map(|(i, e)| Experiment::from_entry(e, i))
            .collect()
    }

    pub fn scattering_matrix(&self) -> Result<ScatteringMatrix> {
        self.scattering.build(self.k_dim)
    }

    pub fn system(&self) -> Result<LPSystem> {
        LPSystem::new(self.scattering_matrix()?, self.trunc_n, self.grid_factor)
            .map(|s| s.with_tolerances(self.tolerances))
            .map_err(|e| Error::Config(format!("system: {e}")))
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, opts: &RunOptions) -> Result<Self> {
        if let Some(n) = opts.trunc_n {
            self.trunc_n = n;
        }
        if let Some(g) = opts.grid_factor {
            self.grid_factor = g;
        }
        if let Some(seed) = opts.seed {
            self.seed = seed;
        }
        self.validate()?;
        Ok(self)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub trunc_n: Option<usize>,
    pub grid_factor: Option<usize>,
    pub seed: Option<u64>,
    /// Run only these experiment kinds; empty means all.
    pub only: Vec<ExperimentKind>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        Self {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Position in the scenario's experiment list.
    pub index: usize,
    pub kind: ExperimentKind,
    pub passed: bool,
    pub error: Option<ErrorRecord>,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub elapsed_seconds: f64,
}

/// The scenario as run: overrides and defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedScenario {
    pub name: String,
    pub k_dim: usize,
    pub trunc_n: usize,
    pub grid_factor: usize,
    pub seed: u64,
    pub scattering: ScatteringSpec,
    pub tolerances: Tolerances,
    pub experiments: Vec<Experiment>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: ResolvedScenario,
    pub passed: bool,
    pub experiments: Vec<ExperimentRecord>,
    pub elapsed_seconds: f64,
}

impl ScenarioReport {
    pub fn record(&self, kind: ExperimentKind) -> Option<&ExperimentRecord> {
        self.experiments.iter().find(|r| r.kind == kind)
    }

    /// Every residual, witness and diagnostic keyed `kind[index].name`.
    pub fn numbers(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for r in &self.experiments {
            let o = &r.outcome;
            for (group, map) in [
                ("residual", &o.residuals),
                ("witness", &o.witnesses),
                ("diagnostic", &o.diagnostics),
            ] {
                for (k, v) in map {
                    out.insert(format!("{}[{}].{group}.{k}", r.kind.name(), r.index), *v);
                }
            }
        }
        out
    }
}

fn run_one(
    exp: &Experiment,
    index: usize,
    scenario: &Scenario,
    sys: &LPSystem,
) -> ExperimentRecord {
    let start = Instant::now();
    let seed = experiments::sub_seed(scenario.seed, exp.kind().salt());
    let (dim, n) = (scenario.k_dim, scenario.trunc_n);
    let tol = &scenario.tolerances;
    let result = match exp {
        Experiment::Projections(p) => experiments::projections(n, dim, seed, p, tol.identity),
        Experiment::Semigroup(p) => experiments::semigroup(n, dim, seed, p, tol),
        Experiment::Identification(p) => experiments::identification(sys, seed, p),
        Experiment::Theorem1(p) => experiments::projection_algebra(sys, seed, p),
        Experiment::LpSemigroup(p) => experiments::lp_semigroup(sys, seed, p),
        Experiment::SurvivalScan(p) => experiments::survival_scan(sys, p),
        Experiment::PoleCorrespondence(p) => experiments::pole_correspondence(sys, seed, p),
        Experiment::Convergence(p) => experiments::convergence(dim, seed, p),
    };
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(e) => (Outcome::default(), Some(ErrorRecord::from(&e))),
    };
    ExperimentRecord {
        index,
        kind: exp.kind(),
        passed: error.is_none() && outcome.passed(),
        error,
        outcome,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs every (selected) experiment of a scenario; experiments run
/// concurrently and the report keeps scenario order.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<ScenarioReport> {
    let start = Instant::now();
    let scenario = scenario.clone().with_overrides(opts)?;
    let plan: Vec<(usize, Experiment)> = scenario
        .plan()?
        .into_iter()
        .enumerate()
        .filter(|(_, e)| opts.only.is_empty() || opts.only.contains(&e.kind()))
        .collect();
    let sys = scenario.system()?;
    let records: Vec<ExperimentRecord> = plan
        .par_iter()
        .map(|(i, e)| run_one(e, *i, &scenario, &sys))
        .collect();
    Ok(ScenarioReport {
        schema_version: SCHEMA_VERSION,
        passed: records.iter().all(|r| r.passed),
        scenario: ResolvedScenario {
            name: scenario.name.clone(),
            k_dim: scenario.k_dim,
            trunc_n: scenario.trunc_n,
            grid_factor: scenario.grid_factor,
            seed: scenario.seed,
            scattering: scenario.scattering.clone(),
            tolerances: scenario.tolerances,
            experiments: plan.into_iter().map(|(_, e)| e).collect(),
        },
        experiments: records,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Loads and runs a scenario file (or `bundled:name`).
pub fn run_scenario_file(source: &str, opts: &RunOptions) -> Result<ScenarioReport> {
    run_scenario(&Scenario::load(source)?, opts)
}

/// Runs several scenarios concurrently, preserving input order.
pub fn run_batch(scenarios: &[Scenario], opts: &RunOptions) -> Result<Vec<ScenarioReport>> {
    scenarios
        .par_iter()
        .map(|s| run_scenario(s, opts))
        .collect()
}

/// The whole bundled suite.
pub fn bundled_suite() -> Result<Vec<Scenario>> {
    bundled_names()
        .into_iter()
        .map(|n| Scenario::load(&format!("{BUNDLED_PREFIX}{n}")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub scenario: String,
    /// `kind[index].group.name`, as in [`ScenarioReport::numbers`].
    pub quantity: String,
    pub trunc_n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub n_list: Vec<usize>,
    pub rows: Vec<ConvergenceRow>,
    /// Residuals that grew by more than [`CONVERGENCE_SLACK`] above [`CONVERGENCE_FLOOR`].
    pub anomalies: Vec<String>,
}

impl ConvergenceTable {
    pub fn passed(&self) -> bool {
        self.anomalies.is_empty()
    }

    pub fn series(&self, quantity: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.quantity == quantity)
            .map(|r| r.value)
            .collect()
    }
}

/// Repeats a scenario at each truncation and tabulates every reported number.
///
/// Residuals (not witnesses or diagnostics) must decrease with `N` up to a
/// factor [`CONVERGENCE_SLACK`]; values below [`CONVERGENCE_FLOOR`] are
/// considered converged.
pub fn run_convergence(
    scenario: &Scenario,
    n_list: &[usize],
    opts: &RunOptions,
) -> Result<ConvergenceTable> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "truncation list must be nonempty and ascending".into(),
        ));
    }
    let mut opts = opts.clone();
    if opts.only.is_empty() {
        opts.only = ExperimentKind::ALL.to_vec();
    }
    opts.only.retain(|k| *k != ExperimentKind::Convergence);
    let reports: Vec<ScenarioReport> = n_list
        .iter()
        .map(|&n| {
            let o = RunOptions {
                trunc_n: Some(n),
                ..opts.clone()
            };
            run_scenario(scenario, &o)
        })
        .collect::<Result<_>>()?;
    let mut rows = vec![];
    let mut by_quantity: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (n, rep) in n_list.iter().zip(&reports) {
        for (q, v) in rep.numbers() {
            if q.contains(".residual.") {
                by_quantity.entry(q.clone()).or_default().push(v);
            }
            rows.push(ConvergenceRow {
                scenario: scenario.name.clone(),
                quantity: q,
                trunc_n: *n,
                value: v,
            });
        }
    }
    let anomalies = by_quantity
        .into_iter()
        .filter(|(_, s)| s.len() == n_list.len() && !monotone_within_slack(s))
        .map(|(q, _)| q)
        .collect();
    Ok(ConvergenceTable {
        n_list: n_list.to_vec(),
        rows,
        anomalies,
    })
}

fn atomic_write(path: &Path, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    write(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Serializes `value` as pretty JSON, replacing `path` atomically.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    atomic_write(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    })
}

/// Writes convergence rows as CSV, replacing `path` atomically.
pub fn write_convergence_csv(path: &Path, tables: &[ConvergenceTable]) -> Result<()> {
    atomic_write(path, |w| {
        let mut csv = csv::Writer::from_writer(w);
        for t in tables {
            for r in &t.rows {
                csv.serialize(r).map_err(|e| Error::Io(e.into()))?;
            }
        }
        csv.flush()?;
        Ok(())
    })
}
