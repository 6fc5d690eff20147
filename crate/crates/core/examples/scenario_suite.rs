//! Running bundled scenarios through the library API and writing reports.
//!
//! ```bash
//! cargo run --release --example scenario_suite -- inner_single smooth_phase
//! ```

use lpscatter::cli::{
    bundled_names, run_scenario, write_json, RunOptions, Scenario, BUNDLED_PREFIX,
};

fn main() -> lpscatter::Result<()> {
    let mut names: Vec<String> = std::env::args().skip(1).collect();
    if names.is_empty() {
        names = vec!["inner_single".into(), "anti_inner_single".into()];
    }
    println!("bundled: {}", bundled_names().join(", "));
    let out = std::env::temp_dir().join("lpscatter-reports");
    std::fs::create_dir_all(&out)?;
    for name in names {
        let scenario = Scenario::load(&format!("{BUNDLED_PREFIX}{name}"))?;
        let report = run_scenario(&scenario, &RunOptions::default())?;
        println!(
            "\n{name}: {}",
            if report.passed { "passed" } else { "FAILED" }
        );
        for r in &report.experiments {
            let worst = r.outcome.residuals.values().fold(0.0f64, |a, &b| a.max(b));
            println!(
                "  {:<20} {:<6} worst residual {worst:.1e}",
                r.kind.name(),
                r.passed
            );
        }
        let path = out.join(format!("{name}.json"));
        write_json(&path, &report)?;
        println!("  report: {}", path.display());
    }
    Ok(())
}
