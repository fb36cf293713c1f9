//! The padded Hungarian pipeline against exhaustive search on tiny instances.

use donsa::assignment::{
    brute_force_solve, donsa, restricted_quota, search_space, Restriction, SolveOptions,
};
use donsa::selftest::random_tiny_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> donsa::Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = SolveOptions::default();
    let mut agree = 0;
    for i in 0..25 {
        let inst = random_tiny_instance(&mut rng);
        let restriction = Restriction::unrestricted(&inst.catalog);
        let quota = restricted_quota(&inst.topology, &inst.catalog, &restriction, &opts);
        let fast = donsa(&inst.topology, &inst.rates, &inst.catalog, &opts)?;
        let slow = brute_force_solve(
            &inst.topology,
            &inst.rates,
            &inst.catalog,
            &quota,
            &restriction,
        )?;
        println!(
            "#{i:<2} sources {} k {} visited {:>6} pipeline {:>6} exhaustive {:>6}",
            inst.topology.n_sources(),
            quota.k,
            slow.visited,
            fast.objective_total,
            slow.objective
        );
        if fast.objective_total == slow.objective {
            agree += 1;
        }
    }
    println!(
        "{agree}/25 agree; a 6-source, 40-column space has {} points",
        search_space(6, 40, 6)
    );
    Ok(agree)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
