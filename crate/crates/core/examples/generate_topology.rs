//! Drop machines into a multi-cell layout and save it in the text format.

use donsa::topology::{generate_cell, Topology};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> donsa::Result<Topology> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let topology = generate_cell(8, 4, 4, 250.0, 200e3, &mut rng)?;
    for bs in topology.base_stations() {
        println!(
            "bs {} at ({:.0}, {:.0})",
            bs.id, bs.position.0, bs.position.1
        );
    }
    let text = topology.to_text();
    println!("{text}");
    let back = Topology::from_text(&text)?;
    assert_eq!(back.n_machines(), 12);
    Ok(back)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
