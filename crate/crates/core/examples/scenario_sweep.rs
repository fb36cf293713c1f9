//! A shortened cell-radius sweep written to CSV, SVG and a gnuplot script.

use donsa::experiments::{emit_results, run_scenario, ScenarioSpec, SweepSettings};
use donsa::rf_model::{ChannelModel, RfCatalog};

pub fn run_example() -> donsa::Result<donsa::experiments::MetricsReport> {
    let spec = ScenarioSpec {
        n_sources: 30,
        n_relays: 30,
        sweep_points: vec![100.0, 400.0, 700.0, 1000.0],
        runs: 4,
        ..ScenarioSpec::s2()
    };
    let report = run_scenario(
        &spec,
        &RfCatalog::default_catalog(),
        &ChannelModel::default(),
        &SweepSettings::default(),
    )?;
    let out = std::env::temp_dir().join("donsa-scenario-sweep");
    let files = emit_results(&report, &out, None)?;
    for (a, name) in report.algorithms.iter().enumerate() {
        let adr: Vec<String> = report.cells[a]
            .iter()
            .map(|c| format!("{:.3e}", c.adr))
            .collect();
        println!("{name:<14} {}", adr.join(" "));
    }
    println!("tables in {}", files.adr.parent().unwrap().display());
    Ok(report)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
