//! Seeded Monte-Carlo sweeps over the three evaluation scenarios.
//!
//! Every run draws one topology and one set of fading realizations, and all
//! algorithms are solved on that same instance. Aggregation happens in
//! (sweep point, run) order, independent of how runs were scheduled.

mod emit;
mod plot;
mod stats;

pub use emit::{emit_results, read_metric_csv, MetricTable, OutputFiles};
pub use plot::{gnuplot_script, render_svg};
pub use stats::{confidence_interval, mean, spearman, ConfidenceInterval};

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::{restricted_quota, AssignmentResult, SolveOptions};
use crate::baselines::{run_algorithm, AlgorithmSpec, ALGORITHM_KEYS};
use crate::error::{Error, Result};
use crate::rf_model::{ChannelModel, RfCatalog};
use crate::topology::{build_rate_table, generate_cell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioId {
    S1,
    S2,
    S3,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    NSources,
    CellRadius,
    RequestedBw,
}

impl SweepVariable {
    /// CSV header of the sweep column, with its unit.
    pub fn column(self) -> &'static str {
        match self {
            SweepVariable::NSources => "n_sources_count",
            SweepVariable::CellRadius => "cell_radius_m",
            SweepVariable::RequestedBw => "requested_bw_hz",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepVariable::NSources => "number of sources",
            SweepVariable::CellRadius => "cell radius (m)",
            SweepVariable::RequestedBw => "requested bandwidth (Hz)",
        }
    }
}

/// One sweep: fixed parameters, the swept one, and the algorithms to compare.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    /// When set, relays = n_machines - n_sources at every point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_machines: Option<usize>,
    pub n_sources: usize,
    pub n_relays: usize,
    #[serde(default = "one")]
    pub n_bs: usize,
    pub cell_radius: f64,
    pub requested_bw: f64,
    pub sweep_variable: SweepVariable,
    pub sweep_points: Vec<f64>,
    pub runs: usize,
    pub algorithms: Vec<String>,
    pub base_seed: u64,
}

fn one() -> usize {
    1
}

fn default_algorithms() -> Vec<String> {
    ALGORITHM_KEYS.iter().map(|s| s.to_string()).collect()
}

impl ScenarioSpec {
    /// 300 machines, sources swept from 25 to 275, 200 kHz, radius 500 m.
    pub fn s1() -> Self {
        Self {
            id: ScenarioId::S1,
            n_machines: Some(300),
            n_sources: 150,
            n_relays: 150,
            n_bs: 1,
            cell_radius: 500.0,
            requested_bw: 200e3,
            sweep_variable: SweepVariable::NSources,
            sweep_points: (1..=11).map(|i| 25.0 * i as f64).collect(),
            runs: 200,
            algorithms: default_algorithms(),
            base_seed: 1,
        }
    }

    /// 150 sources and 150 relays at 200 kHz, radius swept 100 m to 1 km.
    pub fn s2() -> Self {
        Self {
            id: ScenarioId::S2,
            n_machines: None,
            sweep_variable: SweepVariable::CellRadius,
            sweep_points: (1..=10).map(|i| 100.0 * i as f64).collect(),
            ..Self::s1()
        }
    }

    /// 150 sources and 150 relays at radius 500 m, request swept 20 kHz to 20 MHz.
    pub fn s3() -> Self {
        Self {
            id: ScenarioId::S3,
            n_machines: None,
            sweep_variable: SweepVariable::RequestedBw,
            sweep_points: vec![
                20e3, 50e3, 100e3, 200e3, 500e3, 1e6, 1.4e6, 2e6, 5e6, 10e6, 20e6,
            ],
            ..Self::s1()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "s1" => Ok(Self::s1()),
            "s2" => Ok(Self::s2()),
            "s3" => Ok(Self::s3()),
            other => Err(Error::InvalidArgument(format!(
                "unknown scenario `{other}`, expected s1, s2 or s3"
            ))),
        }
    }

    pub fn algorithm_specs(&self) -> Result<Vec<AlgorithmSpec>> {
        self.algorithms.iter().map(|a| a.parse()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("scenario: {m}")));
        if self.sweep_points.is_empty() {
            return bad("sweep_points is empty".into());
        }
        if !self.sweep_points.windows(2).all(|w| w[0] < w[1])
            && !self.sweep_points.windows(2).all(|w| w[0] > w[1])
        {
            return bad("sweep_points must be strictly monotone".into());
        }
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if self.n_bs == 0 {
            return bad("n_bs must be >= 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms".into());
        }
        self.algorithm_specs()
            .map_err(|e| Error::Config(format!("scenario: {e}")))?;
        for &p in &self.sweep_points {
            self.point(p)?;
        }
        Ok(())
    }

    /// `(n_sources, n_relays, cell_radius, requested_bw)` at sweep value `p`.
    pub fn point(&self, p: f64) -> Result<(usize, usize, f64, f64)> {
        let bad = |m: String| Err(Error::Config(format!("scenario: {m}")));
        let mut out = (
            self.n_sources,
            self.n_relays,
            self.cell_radius,
            self.requested_bw,
        );
        match self.sweep_variable {
            SweepVariable::NSources => {
                if !(p >= 0.0 && p.fract() == 0.0) {
                    return bad(format!("n_sources sweep value {p} is not a count"));
                }
                out.0 = p as usize;
            }
            SweepVariable::CellRadius => out.2 = p,
            SweepVariable::RequestedBw => out.3 = p,
        }
        if let Some(total) = self.n_machines {
            if out.0 > total {
                return bad(format!("{} sources exceed {total} machines", out.0));
            }
            out.1 = total - out.0;
        }
        if !(out.2 > 0.0 && out.2.is_finite()) {
            return bad(format!("cell_radius {}", out.2));
        }
        if !(out.3 > 0.0 && out.3.is_finite()) {
            return bad(format!("requested_bw {}", out.3));
        }
        Ok(out)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` at sweep point `point`:
/// `splitmix64(base ^ splitmix64(point << 32 | run))`.
pub fn run_seed(base_seed: u64, point: usize, run: usize) -> u64 {
    splitmix64(base_seed ^ splitmix64(((point as u64) << 32) | run as u64))
}

/// Mean rate over all sources, unmatched ones counting as zero.
pub fn compute_adr(result: &AssignmentResult, n_sources: usize) -> f64 {
    assert!(n_sources >= 1, "ADR needs at least one source");
    result.objective_total / n_sources as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSample {
    pub adr: f64,
    pub nus: usize,
    pub aet_ms: f64,
}

/// Aggregates for one algorithm at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub adr: f64,
    /// 95% half-width in percent of the mean; `None` for a single run.
    pub adr_ci_pct: Option<f64>,
    pub nus: f64,
    pub nus_ci_pct: Option<f64>,
    pub aet_ms: f64,
    /// Total connection capacity of the algorithm's BSs, before truncation.
    pub capacity: u64,
    pub samples: Vec<RunSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub scenario: ScenarioId,
    pub sweep_variable: SweepVariable,
    pub sweep_points: Vec<f64>,
    pub algorithms: Vec<String>,
    /// `cells[algorithm][point]`
    pub cells: Vec<Vec<Cell>>,
    /// Interfaces of either class able to carry the request, per point.
    pub eligible_rfs: Vec<usize>,
    pub n_sources: Vec<usize>,
    pub seeds: Vec<Vec<u64>>,
}

impl MetricsReport {
    pub fn cell(&self, algorithm: &str, point: usize) -> Option<&Cell> {
        let a = self.algorithms.iter().position(|x| x == algorithm)?;
        self.cells[a].get(point)
    }

    pub fn series(&self, algorithm: &str, f: impl Fn(&Cell) -> f64) -> Vec<f64> {
        let a = self
            .algorithms
            .iter()
            .position(|x| x == algorithm)
            .expect("algorithm in report");
        self.cells[a].iter().map(f).collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepSettings {
    pub solve: SolveOptions,
    /// Worker threads for independent runs; 0 means all cores.
    pub jobs: usize,
}

fn one_run(
    spec: &ScenarioSpec,
    algorithms: &[AlgorithmSpec],
    catalog: &RfCatalog,
    cm: &ChannelModel,
    opts: &SolveOptions,
    params: (usize, usize, f64, f64),
    seed: u64,
) -> Result<Vec<RunSample>> {
    let (n_s, n_r, radius, bw) = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topology = generate_cell(n_s, n_r, spec.n_bs, radius, bw, &mut rng)?;
    let rates = build_rate_table(&topology, catalog, cm, &mut rng)?;
    algorithms
        .iter()
        .map(|alg| {
            let start = Instant::now();
            let result = run_algorithm(alg, &topology, &rates, catalog, opts)?;
            let aet_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(RunSample {
                adr: if n_s == 0 {
                    0.0
                } else {
                    compute_adr(&result, n_s)
                },
                nus: result.unmatched_count(),
                aet_ms,
            })
        })
        .collect()
}

fn ci_pct(samples: &[f64]) -> Option<f64> {
    confidence_interval(samples, 0.95)
        .ok()
        .map(|c| c.halfwidth_pct)
}

pub fn run_scenario(
    spec: &ScenarioSpec,
    catalog: &RfCatalog,
    cm: &ChannelModel,
    settings: &SweepSettings,
) -> Result<MetricsReport> {
    spec.validate()?;
    cm.validate()?;
    let algorithms = spec.algorithm_specs()?;
    let restrictions = algorithms
        .iter()
        .map(|a| a.restriction(catalog))
        .collect::<Result<Vec<_>>>()?;
    let params = spec
        .sweep_points
        .iter()
        .map(|&p| spec.point(p))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<Vec<u64>> = (0..params.len())
        .map(|p| {
            (0..spec.runs)
                .map(|r| run_seed(spec.base_seed, p, r))
                .collect()
        })
        .collect();
    let jobs: Vec<(usize, usize)> = (0..params.len())
        .flat_map(|p| (0..spec.runs).map(move |r| (p, r)))
        .collect();

    let work = || {
        jobs.par_iter()
            .map(|&(p, r)| {
                one_run(
                    spec,
                    &algorithms,
                    catalog,
                    cm,
                    &settings.solve,
                    params[p],
                    seeds[p][r],
                )
            })
            .collect::<Result<Vec<_>>>()
    };
    let outcomes = if settings.jobs == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(settings.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(work)?
    };

    let mut cells = Vec::with_capacity(algorithms.len());
    for (a, restriction) in restrictions.iter().enumerate() {
        let mut row = Vec::with_capacity(params.len());
        for (p, &(n_s, n_r, radius, bw)) in params.iter().enumerate() {
            let samples: Vec<RunSample> = outcomes[p * spec.runs..(p + 1) * spec.runs]
                .iter()
                .map(|o| o[a])
                .collect();
            let adr: Vec<f64> = samples.iter().map(|s| s.adr).collect();
            let nus: Vec<f64> = samples.iter().map(|s| s.nus as f64).collect();
            let aet: Vec<f64> = samples.iter().map(|s| s.aet_ms).collect();
            // capacity only depends on counts and the request, not on positions
            let shape = generate_cell(
                n_s,
                n_r,
                spec.n_bs,
                radius,
                bw,
                &mut ChaCha8Rng::seed_from_u64(0),
            )?;
            let untruncated = SolveOptions {
                truncate_channels_to_sources: false,
                ..settings.solve
            };
            let capacity = restricted_quota(&shape, catalog, restriction, &untruncated).capacity();
            row.push(Cell {
                adr: mean(&adr),
                adr_ci_pct: ci_pct(&adr),
                nus: mean(&nus),
                nus_ci_pct: ci_pct(&nus),
                aet_ms: mean(&aet),
                capacity,
                samples,
            });
        }
        cells.push(row);
    }

    Ok(MetricsReport {
        scenario: spec.id,
        sweep_variable: spec.sweep_variable,
        sweep_points: spec.sweep_points.clone(),
        algorithms: algorithms.iter().map(|a| a.key()).collect(),
        cells,
        eligible_rfs: params.iter().map(|p| catalog.eligible_count(p.3)).collect(),
        n_sources: params.iter().map(|p| p.0).collect(),
        seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::{Decision, SourceAssignment};

    fn small(id: ScenarioSpec) -> ScenarioSpec {
        ScenarioSpec {
            n_machines: id.n_machines.map(|_| 80),
            n_sources: 10,
            n_relays: 10,
            sweep_points: id.sweep_points.iter().take(3).copied().collect(),
            runs: 3,
            ..id
        }
    }

    #[test]
    fn adr_examples() {
        let unmatched = SourceAssignment {
            decision: Decision::Unmatched,
            rate: 0.0,
        };
        let served = SourceAssignment {
            decision: Decision::Direct { bs: 0, m2b_rf: 0 },
            rate: 1e6,
        };
        assert_eq!(
            compute_adr(&AssignmentResult::new(vec![unmatched; 3], 0), 3),
            0.0
        );
        let r = AssignmentResult::new(vec![served, unmatched], 1);
        assert_eq!(compute_adr(&r, 2), 5e5);
        assert_eq!(compute_adr(&r, 2) * 2.0, r.objective_total);
    }

    #[test]
    fn presets_validate() {
        for s in ["s1", "s2", "s3"] {
            ScenarioSpec::preset(s).unwrap().validate().unwrap();
        }
        assert_eq!(ScenarioSpec::s1().runs, 200);
        assert_eq!(
            ScenarioSpec::s1().point(100.0).unwrap(),
            (100, 200, 500.0, 200e3)
        );
    }

    #[test]
    fn invalid_specs() {
        let mut s = ScenarioSpec::s2();
        s.sweep_points = vec![100.0, 100.0];
        assert!(s.validate().is_err());
        s.sweep_points = vec![];
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::s1();
        s.sweep_points = vec![301.0];
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::s1();
        s.algorithms = vec!["magic".into()];
        assert!(s.validate().is_err());
    }

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(run_seed(7, 2, 3), run_seed(7, 2, 3));
        assert_ne!(run_seed(7, 2, 3), run_seed(7, 3, 2));
        assert_ne!(run_seed(7, 0, 0), run_seed(8, 0, 0));
    }

    #[test]
    fn sweeps_are_reproducible() {
        let spec = small(ScenarioSpec::s2());
        let cat = RfCatalog::default_catalog();
        let cm = ChannelModel::default();
        let a = run_scenario(&spec, &cat, &cm, &SweepSettings::default()).unwrap();
        let b = run_scenario(
            &spec,
            &cat,
            &cm,
            &SweepSettings {
                jobs: 2,
                ..Default::default()
            },
        )
        .unwrap();
        for (ra, rb) in a.cells.iter().zip(&b.cells) {
            for (ca, cb) in ra.iter().zip(rb) {
                assert_eq!(ca.adr, cb.adr);
                assert_eq!(ca.nus, cb.nus);
                assert_eq!(ca.adr_ci_pct, cb.adr_ci_pct);
            }
        }
        assert_eq!(a.seeds, b.seeds);
    }

    #[test]
    fn single_run_has_no_interval() {
        let spec = ScenarioSpec {
            runs: 1,
            ..small(ScenarioSpec::s3())
        };
        let r = run_scenario(
            &spec,
            &RfCatalog::default_catalog(),
            &ChannelModel::default(),
            &SweepSettings::default(),
        )
        .unwrap();
        assert!(r.cells.iter().flatten().all(|c| c.adr_ci_pct.is_none()));
    }

    #[test]
    fn paired_dominance_per_run() {
        let spec = small(ScenarioSpec::s1());
        let r = run_scenario(
            &spec,
            &RfCatalog::default_catalog(),
            &ChannelModel::default(),
            &SweepSettings::default(),
        )
        .unwrap();
        for p in 0..r.sweep_points.len() {
            for run in 0..spec.runs {
                let adr = |a: usize| r.cells[a][p].samples[run].adr;
                assert!(adr(0) >= adr(1) && adr(1) >= adr(2) && adr(0) >= adr(3));
            }
        }
    }
}
