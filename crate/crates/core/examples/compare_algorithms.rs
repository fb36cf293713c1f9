//! The four algorithms on one shared instance, with per-source rates side by side.

use donsa::assignment::SolveOptions;
use donsa::baselines::{run_algorithm, AlgorithmSpec};
use donsa::experiments::compute_adr;
use donsa::rf_model::{ChannelModel, RfCatalog};
use donsa::topology::{build_rate_table, generate_cell};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> donsa::Result<Vec<(String, f64, usize)>> {
    let catalog = RfCatalog::default_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let topology = generate_cell(40, 40, 1, 400.0, 200e3, &mut rng)?;
    let rates = build_rate_table(&topology, &catalog, &ChannelModel::default(), &mut rng)?;
    let mut rows = Vec::new();
    for alg in AlgorithmSpec::presets() {
        let r = run_algorithm(&alg, &topology, &rates, &catalog, &SolveOptions::default())?;
        let adr = compute_adr(&r, topology.n_sources());
        println!(
            "{:<14} adr {:>12.4e} bits/s  unmatched {:>3}",
            alg.key(),
            adr,
            r.unmatched_count()
        );
        rows.push((alg.key(), adr, r.unmatched_count()));
    }
    Ok(rows)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
