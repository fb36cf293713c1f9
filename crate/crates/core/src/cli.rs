//! Command-line front end: `run`, `compare`, `sweep`, `audit`, `selftest`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assignment::dump::{self, Dump, DumpContext};
use crate::assignment::{
    audit_conflicts, build_sap, enumerate_vertices, extract_assignment, hungarian_solve,
    restricted_quota, AssignmentResult, ConflictReport, Decision, Sense,
};
use crate::baselines::{run_algorithm, AlgorithmSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::experiments::{compute_adr, emit_results, run_scenario, ScenarioSpec, SweepSettings};
use crate::rf_model::RfCatalog;
use crate::selftest::run_selftest;
use crate::topology::{build_rate_table, generate_cell, RateTable, Topology};

#[derive(Debug, Parser)]
#[command(
    name = "donsa",
    version,
    about = "Next-hop and RF interface selection for M2M sources"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one generated instance and print each source's decision.
    Run(InstanceArgs),
    /// Solve one instance with several algorithms and print a paired table.
    Compare(InstanceArgs),
    /// Monte-Carlo sweep over a scenario; writes CSVs, plots and a manifest.
    Sweep(SweepArgs),
    /// Check a dumped result or s-AP instance for resource conflicts.
    Audit(AuditArgs),
    /// Compare the pipeline against exhaustive search on tiny instances.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML configuration document; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated algorithm keys.
    #[arg(long, value_delimiter = ',')]
    pub algorithms: Option<Vec<String>>,
    #[arg(long)]
    pub repair_conflicts: bool,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub sources: Option<usize>,
    #[arg(long)]
    pub relays: Option<usize>,
    #[arg(long)]
    pub bs: Option<usize>,
    /// Cell radius in metres.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Requested bandwidth per link in Hz.
    #[arg(long)]
    pub bw: Option<f64>,
    /// Read node positions from a topology text file instead of generating.
    #[arg(long, conflicts_with_all = ["sources", "relays", "bs", "radius", "bw"])]
    pub topology: Option<PathBuf>,
    /// Write the first algorithm's result as an assignment dump.
    #[arg(long)]
    pub dump_result: Option<PathBuf>,
    /// Write the first algorithm's padded s-AP instance.
    #[arg(long)]
    pub dump_sap: Option<PathBuf>,
    /// Write the topology used.
    #[arg(long)]
    pub dump_topology: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Built-in scenario preset: s1, s2 or s3.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// An assignment dump or an s-AP dump.
    pub dump: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs the command.
pub fn main_from_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    match execute(cli, &mut stdout.lock()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one command. `Ok(false)` means it completed but reported failure.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Run(a) => instance(a, false, out).map(|_| true),
        Command::Compare(a) => instance(a, true, out).map(|_| true),
        Command::Sweep(a) => sweep(a, out).map(|_| true),
        Command::Audit(a) => audit(&a.dump, out).map(|_| true),
        Command::Selftest(a) => selftest(a, out),
    }
}

fn w(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Loads the file (or defaults) and applies the flags common to all
/// commands. Returns the names of flags that overrode something.
fn base_config(common: &CommonArgs) -> Result<(Config, Vec<String>)> {
    let mut cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    cfg.provenance = None;
    let mut overridden = Vec::new();
    if let Some(seed) = common.seed {
        cfg.scenario.base_seed = seed;
        overridden.push("--seed".to_string());
    }
    if let Some(algs) = &common.algorithms {
        cfg.scenario.algorithms = algs.clone();
        overridden.push("--algorithms".to_string());
    }
    if common.repair_conflicts {
        cfg.repair_conflicts = true;
        overridden.push("--repair-conflicts".to_string());
    }
    Ok((cfg, overridden))
}

fn rf_name(catalog: &RfCatalog, m2m: bool, t: usize) -> &str {
    if m2m {
        &catalog.m2m()[t].id
    } else {
        &catalog.m2b()[t].id
    }
}

fn describe(catalog: &RfCatalog, d: &Decision) -> String {
    match *d {
        Decision::Unmatched => "unmatched".to_string(),
        Decision::Direct { bs, m2b_rf } => {
            format!("direct bs {bs} via {}", rf_name(catalog, false, m2b_rf))
        }
        Decision::Relayed {
            relay,
            m2m_rf,
            bs,
            m2b_rf,
        } => format!(
            "relay {relay} via {}, then bs {bs} via {}",
            rf_name(catalog, true, m2m_rf),
            rf_name(catalog, false, m2b_rf)
        ),
    }
}

fn load_instance(
    a: &InstanceArgs,
    cfg: &Config,
    catalog: &RfCatalog,
) -> Result<(Topology, RateTable)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.scenario.base_seed);
    let topology = match &a.topology {
        Some(p) => Topology::from_text(&fs::read_to_string(p).map_err(|e| Error::io(p, e))?)?,
        None => {
            let s = &cfg.scenario;
            generate_cell(
                a.sources.unwrap_or(s.n_sources),
                a.relays.unwrap_or(s.n_relays),
                a.bs.unwrap_or(s.n_bs),
                a.radius.unwrap_or(s.cell_radius),
                a.bw.unwrap_or(s.requested_bw),
                &mut rng,
            )?
        }
    };
    let rates = build_rate_table(&topology, catalog, &cfg.channel_model, &mut rng)?;
    Ok((topology, rates))
}

fn instance(a: InstanceArgs, compare: bool, out: &mut dyn Write) -> Result<()> {
    let (mut cfg, _) = base_config(&a.common)?;
    if compare && a.common.algorithms.is_none() {
        cfg.scenario.algorithms = crate::baselines::ALGORITHM_KEYS
            .iter()
            .map(|s| s.to_string())
            .collect();
    } else if !compare && a.common.algorithms.is_none() {
        cfg.scenario.algorithms = vec![AlgorithmSpec::donsa_wbz_lmn().key()];
    }
    cfg.validate()?;
    let catalog = cfg.catalog()?;
    let algorithms = cfg.scenario.algorithm_specs()?;
    let opts = cfg.solve_options();
    let (topology, rates) = load_instance(&a, &cfg, &catalog)?;

    let mut results = Vec::with_capacity(algorithms.len());
    for alg in &algorithms {
        results.push(run_algorithm(alg, &topology, &rates, &catalog, &opts)?);
    }

    // render and write dumps before printing anything
    let first = &algorithms[0];
    let restriction = first.restriction(&catalog)?;
    let quota = restricted_quota(&topology, &catalog, &restriction, &opts);
    let ctx = DumpContext::new(&catalog, &quota);
    let mut writes: Vec<(&Path, String)> = Vec::new();
    if let Some(p) = &a.dump_result {
        writes.push((p, dump::write_result(&results[0], &ctx)));
    }
    if let Some(p) = &a.dump_sap {
        let vertices = enumerate_vertices(&topology, &catalog, &quota, &restriction);
        let sap = build_sap(&topology, &rates, &quota, &vertices)?;
        writes.push((p, dump::write_sap(&sap, &ctx)));
    }
    if let Some(p) = &a.dump_topology {
        writes.push((p, topology.to_text()));
    }
    for (p, body) in writes {
        fs::write(p, body).map_err(|e| Error::io(p, e))?;
    }

    let n_s = topology.n_sources();
    writeln!(
        out,
        "instance: {} sources, {} relays, {} bs, radius {} m, request {} Hz",
        n_s,
        topology.n_relays(),
        topology.n_bs(),
        topology.cell_radius,
        topology.requested_bw
    )
    .map_err(w)?;
    if compare {
        print_compare(out, &algorithms, &results, n_s)
    } else {
        for (alg, r) in algorithms.iter().zip(&results) {
            print_result(out, alg, r, &catalog, n_s)?;
        }
        Ok(())
    }
}

fn adr(r: &AssignmentResult, n_s: usize) -> f64 {
    if n_s == 0 {
        0.0
    } else {
        compute_adr(r, n_s)
    }
}

fn print_result(
    out: &mut dyn Write,
    alg: &AlgorithmSpec,
    r: &AssignmentResult,
    catalog: &RfCatalog,
    n_s: usize,
) -> Result<()> {
    writeln!(
        out,
        "{}: k {}, matched {}, unmatched {}, objective {:.6e} bits/s, adr {:.6e} bits/s",
        alg,
        r.k,
        r.matched_count(),
        r.unmatched_count(),
        r.objective_total,
        adr(r, n_s)
    )
    .map_err(w)?;
    for (s, a) in r.assignments.iter().enumerate() {
        writeln!(
            out,
            "  source {s}: {} ({:.6e} bits/s)",
            describe(catalog, &a.decision),
            a.rate
        )
        .map_err(w)?;
    }
    Ok(())
}

fn print_compare(
    out: &mut dyn Write,
    algorithms: &[AlgorithmSpec],
    results: &[AssignmentResult],
    n_s: usize,
) -> Result<()> {
    writeln!(
        out,
        "{:<16} {:>8} {:>10} {:>16}",
        "algorithm", "matched", "unmatched", "adr_bits_per_s"
    )
    .map_err(w)?;
    for (alg, r) in algorithms.iter().zip(results) {
        writeln!(
            out,
            "{:<16} {:>8} {:>10} {:>16.6e}",
            alg.key(),
            r.matched_count(),
            r.unmatched_count(),
            adr(r, n_s)
        )
        .map_err(w)?;
    }
    writeln!(out).map_err(w)?;
    let mut header = format!("{:<8}", "source");
    for alg in algorithms {
        header.push_str(&format!(" {:>16}", alg.key()));
    }
    writeln!(out, "{header}").map_err(w)?;
    for s in 0..n_s {
        let mut line = format!("{s:<8}");
        for r in results {
            line.push_str(&format!(" {:>16.6e}", r.assignments[s].rate));
        }
        writeln!(out, "{line}").map_err(w)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Result<()> {
    let (mut cfg, mut overridden) = base_config(&a.common)?;
    if let Some(name) = &a.scenario {
        let preset = ScenarioSpec::preset(name)?;
        // keep per-scenario overrides from this invocation, not from the file
        let keep_seed = a.common.seed.map(|_| cfg.scenario.base_seed);
        let keep_algs = a
            .common
            .algorithms
            .as_ref()
            .map(|_| cfg.scenario.algorithms.clone());
        cfg.scenario = preset;
        if let Some(s) = keep_seed {
            cfg.scenario.base_seed = s;
        }
        if let Some(algs) = keep_algs {
            cfg.scenario.algorithms = algs;
        }
        overridden.push("--scenario".to_string());
    }
    if let Some(runs) = a.runs {
        cfg.scenario.runs = runs;
        overridden.push("--runs".to_string());
    }
    if let Some(dir) = &a.out {
        cfg.output_dir = dir.clone();
        overridden.push("--out".to_string());
    }
    cfg.validate()?;
    let catalog = cfg.catalog()?;
    let settings = SweepSettings {
        solve: cfg.solve_options(),
        jobs: a.jobs.unwrap_or(0),
    };
    let report = run_scenario(&cfg.scenario, &catalog, &cfg.channel_model, &settings)?;
    let manifest = cfg.manifest(&report, &overridden)?;
    let files = emit_results(&report, &cfg.output_dir, Some(&manifest))?;
    writeln!(
        out,
        "sweep {:?}: {} points x {} runs, {} algorithms",
        cfg.scenario.id,
        report.sweep_points.len(),
        cfg.scenario.runs,
        report.algorithms.len()
    )
    .map_err(w)?;
    for p in [
        &files.adr,
        &files.nus,
        &files.aet,
        &files.svg,
        &files.gnuplot,
    ]
    .into_iter()
    .chain(files.manifest.as_ref())
    {
        writeln!(out, "wrote {}", p.display()).map_err(w)?;
    }
    Ok(())
}

fn print_report(out: &mut dyn Write, report: &ConflictReport, ctx: &DumpContext) -> Result<()> {
    writeln!(out, "conflicts: {}", report.len()).map_err(w)?;
    for r in &report.relay_reuse {
        writeln!(
            out,
            "  relay {} on {} carries {} sources",
            r.relay, ctx.m2m_ids[r.m2m_rf], r.sources
        )
        .map_err(w)?;
    }
    for b in &report.bs_overuse {
        writeln!(
            out,
            "  bs {} on {} holds {} connections, quota {}",
            b.bs, ctx.m2b_ids[b.m2b_rf], b.used, b.quota
        )
        .map_err(w)?;
    }
    Ok(())
}

fn audit(path: &Path, out: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (result, ctx) = match dump::parse(&text)? {
        Dump::Result(r, ctx) => (r, ctx),
        Dump::Sap(sap, ctx) => {
            let perm = hungarian_solve(&sap.weights, Sense::Maximize)?;
            (extract_assignment(&sap, &perm)?, ctx)
        }
    };
    writeln!(
        out,
        "result: {} sources, {} matched, objective {:.6e} bits/s",
        result.assignments.len(),
        result.matched_count(),
        result.objective_total
    )
    .map_err(w)?;
    let report = audit_conflicts(&result, &ctx.quota);
    print_report(out, &report, &ctx)
}

fn selftest(a: SelftestArgs, out: &mut dyn Write) -> Result<bool> {
    let report = run_selftest(a.count, a.seed)?;
    for m in &report.mismatches {
        writeln!(
            out,
            "  instance {}: pipeline {} != exhaustive {}",
            m.instance, m.pipeline, m.exhaustive
        )
        .map_err(w)?;
    }
    writeln!(
        out,
        "selftest: {} instances, {} passed, {} failed: {}",
        report.instances,
        report.instances - report.mismatches.len(),
        report.mismatches.len(),
        if report.passed() { "PASS" } else { "FAIL" }
    )
    .map_err(w)?;
    Ok(report.passed())
}
