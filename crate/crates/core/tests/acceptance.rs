// Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use donsa::assignment::{
    brute_force_solve, build_sap, donsa, enumerate_vertices, hungarian_solve, objective,
    restricted_quota, ColTag, Matrix, Restriction, RowTag, Sense, SolveOptions,
};
use donsa::experiments::{run_scenario, spearman, MetricsReport, ScenarioSpec, SweepSettings};
use donsa::rf_model::{ChannelModel, RfCatalog, RfClass, RfInterface};
use donsa::topology::{build_rate_table, generate_cell, Node, RateTable, Role, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------- independent oracles ----------

/// Maximum of `sum m[i][p(i)]` over all permutations (Heap's algorithm).
fn permutation_max(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut p: Vec<usize> = (0..n).collect();
    let score = |p: &[usize]| (0..n).map(|i| m[i][p[i]]).sum::<i64>();
    let mut best = score(&p);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            best = best.max(score(&p));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

/// `min(N_s, N_b * sum_t min(floor(bs_bw / bw), cap, N_s))` over interfaces
/// wide enough for the request.
fn expected_k(catalog: &RfCatalog, n_s: usize, n_bs: usize, bw: f64) -> usize {
    let per_bs: usize = catalog
        .m2b()
        .iter()
        .filter(|rf| rf.channel_bw >= bw)
        .map(|rf| {
            ((rf.bs_total_bw / bw).floor() as usize)
                .min(rf.bs_conn_cap as usize)
                .min(n_s)
        })
        .sum();
    n_s.min(n_bs * per_bs)
}

fn tiny_rf(id: String, class: RfClass, cap: u32) -> RfInterface {
    RfInterface {
        id,
        class,
        channel_bw: 1e6,
        max_rate: None,
        num_channels: 1,
        bs_total_bw: if class == RfClass::M2B {
            1e6 * cap as f64
        } else {
            0.0
        },
        bs_conn_cap: cap,
        carrier_freq: 2.4e9,
        tx_power: 20.0,
    }
}

fn line_topology(n_s: usize, n_r: usize, n_bs: usize, bw: f64) -> Topology {
    let roles = std::iter::repeat_n(Role::Source, n_s)
        .chain(std::iter::repeat_n(Role::Relay, n_r))
        .chain(std::iter::repeat_n(Role::BaseStation, n_bs));
    let nodes = roles
        .enumerate()
        .map(|(id, role)| Node {
            id,
            role,
            position: (id as f64, 1.0),
        })
        .collect();
    Topology::from_nodes(nodes, 50.0, bw).unwrap()
}

fn random_table<R: Rng>(
    rng: &mut R,
    dims: (usize, usize, usize),
    tm: usize,
    tb: usize,
    mut draw: impl FnMut(&mut R) -> f64,
) -> RateTable {
    let (n_s, n_r, n_bs) = dims;
    let m2m: Vec<f64> = (0..n_s * n_r * tm).map(|_| draw(rng)).collect();
    let m2b: Vec<f64> = (0..(n_s + n_r) * n_bs * tb).map(|_| draw(rng)).collect();
    RateTable::from_fn(
        dims,
        tm,
        tb,
        |s, r, t| m2m[(s * n_r + r) * tm + t],
        |m, b, t| m2b[(m * n_bs + b) * tb + t],
    )
}

// ---------- criteria ----------

fn c1_solver_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    for case in 0..500 {
        let n = rng.random_range(1..=7);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(0..=100)).collect())
            .collect();
        let m = Matrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| v as f64).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
        .map_err(|e| e.to_string())?;
        let perm = hungarian_solve(&m, Sense::Maximize).map_err(|e| e.to_string())?;
        let got = objective(&m, &perm);
        let want = permutation_max(&rows) as f64;
        ensure(got == want, || {
            format!("case {case} (n={n}): solver {got}, permutations {want}")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("500 matrices, {t:.2?}"))
}

fn tiny_pipeline_instance<R: Rng>(rng: &mut R) -> (Topology, RateTable, RfCatalog) {
    let n_s = rng.random_range(1..=4);
    let n_r = rng.random_range(0..=2);
    let n_bs = rng.random_range(1..=2);
    let tm = rng.random_range(1..=2);
    let tb = rng.random_range(1..=2);
    // per-BS quota summed over interfaces stays within 3
    let mut budget = 3u32;
    let mut rfs: Vec<RfInterface> = (0..tm)
        .map(|t| tiny_rf(format!("m{t}"), RfClass::M2M, 0))
        .collect();
    for t in 0..tb {
        let cap = rng.random_range(1..=budget.saturating_sub((tb - 1 - t) as u32).max(1));
        budget = budget.saturating_sub(cap);
        rfs.push(tiny_rf(format!("b{t}"), RfClass::M2B, cap));
    }
    let catalog = RfCatalog::new(rfs).unwrap();
    let topology = line_topology(n_s, n_r, n_bs, 1e6);
    let rates = random_table(rng, (n_s, n_r, n_bs), tm, tb, |r| {
        if r.random_bool(0.15) {
            0.0
        } else {
            r.random_range(1..=500) as f64
        }
    });
    (topology, rates, catalog)
}

fn c2_pipeline_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let opts = SolveOptions::default();
    let start = Instant::now();
    let mut max_quota = 0;
    for case in 0..200 {
        let (topology, rates, catalog) = tiny_pipeline_instance(&mut rng);
        let restriction = Restriction::unrestricted(&catalog);
        let quota = restricted_quota(&topology, &catalog, &restriction, &opts);
        max_quota = max_quota.max(quota.per_rf.iter().sum::<u32>());
        let fast = donsa(&topology, &rates, &catalog, &opts).map_err(|e| e.to_string())?;
        let slow = brute_force_solve(&topology, &rates, &catalog, &quota, &restriction)
            .map_err(|e| e.to_string())?;
        ensure(fast.objective_total == slow.objective, || {
            format!(
                "case {case}: pipeline {}, exhaustive {}",
                fast.objective_total, slow.objective
            )
        })?;
    }
    let t = start.elapsed();
    ensure(max_quota <= 3, || {
        format!("generator exceeded the per-BS quota: {max_quota}")
    })?;
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("200 instances, {t:.2?}"))
}

fn c3_cardinality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let catalog = RfCatalog::default_catalog();
    let cm = ChannelModel::default();
    let opts = SolveOptions::default();
    let (mut surplus, mut spare) = (0, 0);
    let mut equal_checks = 0;
    for case in 0..200 {
        let n_s = rng.random_range(1..=40);
        let n_r = rng.random_range(0..=15);
        let n_bs = rng.random_range(1..=2);
        let bw = [200e3, 1e6, 5e6, 20e6][rng.random_range(0..4)];
        let topology =
            generate_cell(n_s, n_r, n_bs, 300.0, bw, &mut rng).map_err(|e| e.to_string())?;
        let rates =
            build_rate_table(&topology, &catalog, &cm, &mut rng).map_err(|e| e.to_string())?;
        let k = expected_k(&catalog, n_s, n_bs, bw);
        if n_s > k {
            surplus += 1;
        } else {
            spare += 1;
        }
        let result = donsa(&topology, &rates, &catalog, &opts).map_err(|e| e.to_string())?;
        ensure(result.k == k, || {
            format!("case {case}: k {} vs {k}", result.k)
        })?;
        let matched = result.matched_count();
        ensure(matched <= k, || {
            format!("case {case}: {matched} matched > k {k}")
        })?;

        // a source has a positive option if any direct link on an interface
        // with nonzero quota is positive; pair replicas number at least k
        let with_option = (0..n_s)
            .filter(|&s| {
                (0..n_bs).any(|b| {
                    catalog.m2b().iter().enumerate().any(|(t, rf)| {
                        rf.channel_bw >= bw
                            && (rf.bs_total_bw / bw).floor() >= 1.0
                            && rf.bs_conn_cap >= 1
                            && rates.m2b(s, b, t) > 0.0
                    })
                })
            })
            .count();
        if with_option >= k {
            equal_checks += 1;
            ensure(matched == k, || {
                format!("case {case}: {matched} matched, k {k}, {with_option} servable")
            })?;
        }

        let restriction = Restriction::unrestricted(&catalog);
        let quota = restricted_quota(&topology, &catalog, &restriction, &opts);
        let vertices = enumerate_vertices(&topology, &catalog, &quota, &restriction);
        let sap = build_sap(&topology, &rates, &quota, &vertices).map_err(|e| e.to_string())?;
        let perm = hungarian_solve(&sap.weights, Sense::Maximize).map_err(|e| e.to_string())?;
        for (row, tag) in sap.row_meta.iter().enumerate() {
            if *tag == RowTag::Dummy {
                ensure(sap.col_meta[perm[row]] != ColTag::Dummy, || {
                    format!("case {case}: dummy row {row} took a dummy column")
                })?;
            }
        }
    }
    ensure(surplus > 0 && spare > 0, || {
        format!("padding cases not both hit: {surplus}/{spare}")
    })?;
    Ok(format!(
        "200 instances ({surplus} with N_s > k, {spare} with N_s <= k), {equal_checks} equality checks"
    ))
}

struct Fixtures {
    s1: MetricsReport,
    s2: MetricsReport,
    s3: MetricsReport,
    s2_s3_time: Duration,
}

fn fixtures() -> donsa::Result<Fixtures> {
    let catalog = RfCatalog::default_catalog();
    let cm = ChannelModel::default();
    let settings = SweepSettings::default();
    let reduced = |s: ScenarioSpec| ScenarioSpec {
        runs: 20,
        base_seed: 2024,
        ..s
    };
    let s1 = run_scenario(&reduced(ScenarioSpec::s1()), &catalog, &cm, &settings)?;
    let start = Instant::now();
    let s2 = run_scenario(&reduced(ScenarioSpec::s2()), &catalog, &cm, &settings)?;
    let s3 = run_scenario(&reduced(ScenarioSpec::s3()), &catalog, &cm, &settings)?;
    Ok(Fixtures {
        s1,
        s2,
        s3,
        s2_s3_time: start.elapsed(),
    })
}

fn c4_dominance(f: &Fixtures) -> Outcome {
    let mut checks = 0;
    for (name, rep) in [("s2", &f.s2), ("s3", &f.s3)] {
        ensure(
            rep.n_sources.iter().all(|&n| n == 150) && rep.algorithms.len() == 4,
            || format!("{name}: unexpected fixture shape"),
        )?;
        let idx = |k: &str| rep.algorithms.iter().position(|a| a == k).unwrap();
        let (d, r, s, t) = (
            idx("donsa_wbz_lmn"),
            idx("dorsa_wbz_l"),
            idx("sorsa_w_l"),
            idx("ditosa_l"),
        );
        for p in 0..rep.sweep_points.len() {
            for run in 0..rep.cells[d][p].samples.len() {
                let adr = |a: usize| rep.cells[a][p].samples[run].adr;
                checks += 1;
                ensure(
                    adr(d) >= adr(r) && adr(r) >= adr(s) && adr(d) >= adr(t),
                    || {
                        format!(
                            "{name} point {} run {run}: donsa {} dorsa {} sorsa {} ditosa {}",
                            rep.sweep_points[p],
                            adr(d),
                            adr(r),
                            adr(s),
                            adr(t)
                        )
                    },
                )?;
            }
            let mean = |a: usize| rep.cells[a][p].adr;
            ensure(
                mean(d) >= mean(r) && mean(r) >= mean(s) && mean(d) >= mean(t),
                || format!("{name} point {}: mean ordering broken", rep.sweep_points[p]),
            )?;
        }
    }
    let t = f.s2_s3_time;
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    Ok(format!("{checks} paired runs, 0 violations, {t:.1?}"))
}

fn c5_trends(f: &Fixtures) -> Outcome {
    let mut notes = Vec::new();
    // S1
    for (a, name) in f.s1.algorithms.iter().enumerate() {
        let mut past = None::<f64>;
        for (p, cell) in f.s1.cells[a].iter().enumerate() {
            let n_s = f.s1.n_sources[p];
            if n_s as u64 <= cell.capacity {
                ensure(cell.nus == 0.0, || {
                    format!(
                        "s1 {name}: nus {} at {n_s} <= capacity {}",
                        cell.nus, cell.capacity
                    )
                })?;
            } else {
                if let Some(prev) = past {
                    ensure(cell.nus >= prev, || {
                        format!("s1 {name}: nus fell from {prev} to {} at {n_s}", cell.nus)
                    })?;
                }
                past = Some(cell.nus);
            }
        }
    }
    // S2 radius trend
    for name in &f.s2.algorithms {
        let adr = f.s2.series(name, |c| c.adr);
        match spearman(&f.s2.sweep_points, &adr) {
            Some(rho) => {
                ensure(rho <= 0.0, || format!("s2 {name}: spearman {rho}"))?;
                notes.push(format!("{name} rho {rho:.2}"));
            }
            None => notes.push(format!("{name} rho undefined (flat)")),
        }
    }
    // S2 single-M2B baselines
    for name in ["dorsa_wbz_l", "sorsa_w_l", "ditosa_l"] {
        for (p, nus) in f.s2.series(name, |c| c.nus).iter().enumerate() {
            ensure(*nus >= 50.0, || {
                format!("s2 {name}: nus {nus} at radius {}", f.s2.sweep_points[p])
            })?;
        }
    }
    // S3 eligibility
    let e = &f.s3.eligible_rfs;
    ensure(e.windows(2).all(|w| w[1] <= w[0]), || {
        format!("s3 eligible counts {e:?}")
    })?;
    ensure(
        f.s3.sweep_points.first() == Some(&20e3) && f.s3.sweep_points.last() == Some(&20e6),
        || "s3 sweep range".to_string(),
    )?;
    Ok(format!("s3 eligible {e:?}; {}", notes.join(", ")))
}

fn dense_instance(n: usize, rng: &mut ChaCha8Rng) -> (Topology, RateTable, RfCatalog) {
    let q = (n / 4) as u32;
    let bw = 100e3;
    let catalog = RfCatalog::new(vec![
        RfInterface {
            channel_bw: bw,
            ..tiny_rf("m".into(), RfClass::M2M, 0)
        },
        RfInterface {
            channel_bw: bw,
            bs_total_bw: bw * q as f64,
            bs_conn_cap: q,
            ..tiny_rf("b".into(), RfClass::M2B, q)
        },
    ])
    .unwrap();
    let topology = line_topology(n / 2, n / 2, 1, bw);
    let rates = random_table(rng, (n / 2, n / 2, 1), 1, 1, |r| r.random_range(1e3..1e6));
    (topology, rates, catalog)
}

fn median_time(n: usize, rng: &mut ChaCha8Rng) -> Result<Duration, String> {
    let (topology, rates, catalog) = dense_instance(n, rng);
    let opts = SolveOptions::default();
    let restriction = Restriction::unrestricted(&catalog);
    let quota = restricted_quota(&topology, &catalog, &restriction, &opts);
    let sap = build_sap(
        &topology,
        &rates,
        &quota,
        &enumerate_vertices(&topology, &catalog, &quota, &restriction),
    )
    .map_err(|e| e.to_string())?;
    ensure(sap.dim() == n, || {
        format!("instance dimension {} != {n}", sap.dim())
    })?;
    let mut times: Vec<Duration> = (0..5)
        .map(|_| {
            let start = Instant::now();
            donsa(&topology, &rates, &catalog, &opts).map(|_| start.elapsed())
        })
        .collect::<donsa::Result<_>>()
        .map_err(|e| e.to_string())?;
    times.sort();
    Ok(times[2])
}

fn c6_complexity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut parts = Vec::new();
    for n in [200, 400, 800] {
        let t1 = median_time(n, &mut rng)?;
        let t2 = median_time(2 * n, &mut rng)?;
        let ratio = t2.as_secs_f64() / t1.as_secs_f64().max(1e-9);
        ensure(ratio <= 10.0, || {
            format!("n={n}: {t1:?} -> {t2:?}, ratio {ratio:.2}")
        })?;
        parts.push(format!("n={n} {t1:.1?} -> {t2:.1?} = {ratio:.2}x"));
    }
    Ok(parts.join(", "))
}

fn c7_argmax_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let catalog = RfCatalog::default_catalog();
    let opts = SolveOptions::default();
    for case in 0..50 {
        let n_s = rng.random_range(1..=30);
        let n_r = rng.random_range(0..=15);
        let n_bs = rng.random_range(1..=2);
        let bw = [200e3, 1e6, 20e6][rng.random_range(0..3)];
        let topology =
            generate_cell(n_s, n_r, n_bs, 300.0, bw, &mut rng).map_err(|e| e.to_string())?;
        // kb/s, integer valued so both scales are exact
        let kbps = random_table(
            &mut rng,
            (n_s, n_r, n_bs),
            catalog.m2m().len(),
            catalog.m2b().len(),
            |r| r.random_range(0..=100_000) as f64,
        );
        let bps = kbps.scaled(1000.0);
        let a = donsa(&topology, &kbps, &catalog, &opts).map_err(|e| e.to_string())?;
        let b = donsa(&topology, &bps, &catalog, &opts).map_err(|e| e.to_string())?;
        ensure(b.objective_total == 1000.0 * a.objective_total, || {
            format!(
                "case {case}: {} vs 1000 x {}",
                b.objective_total, a.objective_total
            )
        })?;
        ensure(a.decisions() == b.decisions(), || {
            format!("case {case}: decisions differ")
        })?;
    }
    Ok("50 instances".to_string())
}

fn c8_reproducibility() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_donsa");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |out: &Path| -> Result<(), String> {
        let status = Command::new(exe)
            .args([
                "sweep",
                "--scenario",
                "s2",
                "--runs",
                "2",
                "--seed",
                "7",
                "--out",
            ])
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a)?;
    run(&b)?;
    for f in ["adr.csv", "nus.csv"] {
        let (x, y) = (std::fs::read(a.join(f)), std::fs::read(b.join(f)));
        ensure(
            matches!((&x, &y), (Ok(x), Ok(y)) if x == y && !x.is_empty()),
            || format!("{f} differs"),
        )?;
    }
    Ok("adr.csv and nus.csv byte-identical across two sweeps".to_string())
}

fn report(id: usize, title: &str, outcome: Outcome, failures: &mut usize) {
    match outcome {
        Ok(detail) => println!("PASS criterion {id}: {title} ({detail})"),
        Err(why) => {
            *failures += 1;
            println!("FAIL criterion {id}: {title} ({why})");
        }
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    report(1, "solver exactness", c1_solver_exactness(), &mut failures);
    report(
        2,
        "pipeline exactness",
        c2_pipeline_exactness(),
        &mut failures,
    );
    report(
        3,
        "cardinality and padding",
        c3_cardinality(),
        &mut failures,
    );
    match fixtures() {
        Ok(f) => {
            report(4, "paired dominance", c4_dominance(&f), &mut failures);
            report(5, "scenario trends", c5_trends(&f), &mut failures);
        }
        Err(e) => {
            report(4, "paired dominance", Err(e.to_string()), &mut failures);
            report(5, "scenario trends", Err(e.to_string()), &mut failures);
        }
    }
    report(6, "cubic scaling", c6_complexity(), &mut failures);
    report(
        7,
        "argmax invariance",
        c7_argmax_invariance(),
        &mut failures,
    );
    report(8, "reproducibility", c8_reproducibility(), &mut failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
