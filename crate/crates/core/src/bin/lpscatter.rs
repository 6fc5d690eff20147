//! Command-line front end for scenario runs.
//!
//! Exit codes: 0 when every experiment passed, 1 when any failed, 2 on a
//! configuration error. `RAYON_NUM_THREADS` caps the worker pool.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use lpscatter::cli::{
    bundled_names, run_batch, run_convergence, write_convergence_csv, write_json, ExperimentKind,
    RunOptions, Scenario, ScenarioReport, BUNDLED_PREFIX,
};
use lpscatter::Error;

#[derive(Parser, Debug)]
#[command(
    name = "lpscatter",
    version,
    about = "Run Lax-Phillips scattering scenarios"
)]
struct Args {
    /// Scenario files, `bundled:<name>`, or `bundled:all`.
    #[arg(required = true)]
    scenarios: Vec<String>,

    /// Report path; a directory when several scenarios are given. Stdout if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,

    /// Override the truncation N.
    #[arg(long)]
    trunc: Option<usize>,

    /// Override the grid oversampling factor.
    #[arg(long)]
    grid_factor: Option<usize>,

    /// Override the probe seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Run only these experiment types (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<ExperimentKind>,

    /// Instead of a single run, sweep these truncations (comma separated).
    #[arg(long, value_delimiter = ',')]
    convergence: Vec<usize>,

    /// CSV path for the convergence table.
    #[arg(long, requires = "convergence")]
    csv: Option<PathBuf>,

    /// Print a per-experiment summary to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn expand(sources: &[String]) -> Vec<String> {
    sources
        .iter()
        .flat_map(|s| {
            if s == "bundled:all" {
                bundled_names()
                    .into_iter()
                    .map(|n| format!("{BUNDLED_PREFIX}{n}"))
                    .collect()
            } else {
                vec![s.clone()]
            }
        })
        .collect()
}

fn summarize(rep: &ScenarioReport, verbose: u8) {
    eprintln!(
        "{}: {} ({:.1}s)",
        rep.scenario.name,
        if rep.passed { "passed" } else { "FAILED" },
        rep.elapsed_seconds
    );
    for r in &rep.experiments {
        let status = if r.passed { "ok" } else { "FAIL" };
        eprintln!("  [{}] {:<20} {status}", r.index, r.kind.name());
        if let Some(e) = &r.error {
            eprintln!("      error ({}): {}", e.code, e.message);
        }
        for (name, ok) in &r.outcome.checks {
            if !ok || verbose > 1 {
                eprintln!("      check {name}: {}", if *ok { "ok" } else { "failed" });
            }
        }
    }
}

fn run(args: Args) -> Result<bool, Error> {
    let opts = RunOptions {
        trunc_n: args.trunc,
        grid_factor: args.grid_factor,
        seed: args.seed,
        only: args.only.clone(),
    };
    let scenarios = expand(&args.scenarios)
        .iter()
        .map(|s| Scenario::load(s))
        .collect::<Result<Vec<_>, _>>()?;

    if !args.convergence.is_empty() {
        let tables = scenarios
            .iter()
            .map(|s| run_convergence(s, &args.convergence, &opts))
            .collect::<Result<Vec<_>, _>>()?;
        for (s, t) in scenarios.iter().zip(&tables) {
            if args.verbose > 0 || !t.passed() {
                eprintln!("{}: {} anomalies", s.name, t.anomalies.len());
                for a in &t.anomalies {
                    eprintln!("  {a}");
                }
            }
        }
        if let Some(csv) = &args.csv {
            write_convergence_csv(csv, &tables)?;
        }
        emit(
            &args.out,
            &tables,
            scenarios.iter().map(|s| s.name.as_str()),
        )?;
        return Ok(tables.iter().all(|t| t.passed()));
    }

    let reports = run_batch(&scenarios, &opts)?;
    if args.verbose > 0 {
        for r in &reports {
            summarize(r, args.verbose);
        }
    }
    emit(
        &args.out,
        &reports,
        reports.iter().map(|r| r.scenario.name.as_str()),
    )?;
    Ok(reports.iter().all(|r| r.passed))
}

fn emit<'a, T: serde::Serialize>(
    out: &Option<PathBuf>,
    items: &[T],
    names: impl Iterator<Item = &'a str>,
) -> Result<(), Error> {
    match out {
        None => {
            let text = if items.len() == 1 {
                serde_json::to_string_pretty(&items[0])
            } else {
                serde_json::to_string_pretty(items)
            }
            .map_err(|e| Error::Io(e.into()))?;
            println!("{text}");
        }
        Some(path) if items.len() == 1 && !path.is_dir() => write_json(path, &items[0])?,
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (item, name) in items.iter().zip(names) {
                write_json(&Path::new(dir).join(format!("{name}.json")), item)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Config(_)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
