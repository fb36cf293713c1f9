//! Generate one cell, build its rate table and pick every source's next hop.

use donsa::assignment::{donsa, Decision, SolveOptions};
use donsa::rf_model::{ChannelModel, RfCatalog};
use donsa::topology::{build_rate_table, generate_cell};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> donsa::Result<donsa::assignment::AssignmentResult> {
    let catalog = RfCatalog::default_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let topology = generate_cell(12, 6, 1, 300.0, 200e3, &mut rng)?;
    let rates = build_rate_table(&topology, &catalog, &ChannelModel::default(), &mut rng)?;
    let result = donsa(&topology, &rates, &catalog, &SolveOptions::default())?;
    for (s, a) in result.assignments.iter().enumerate() {
        let what = match a.decision {
            Decision::Unmatched => "unmatched".to_string(),
            Decision::Direct { bs, m2b_rf } => {
                format!("direct to bs {bs} on {}", catalog.m2b()[m2b_rf].id)
            }
            Decision::Relayed {
                relay,
                m2m_rf,
                m2b_rf,
                ..
            } => format!(
                "via relay {relay} on {} then {}",
                catalog.m2m()[m2m_rf].id,
                catalog.m2b()[m2b_rf].id
            ),
        };
        println!("source {s:>2}: {what:<40} {:>12.4e} bits/s", a.rate);
    }
    println!(
        "total {:.4e} bits/s, {} of {} matched",
        result.objective_total,
        result.matched_count(),
        result.k
    );
    Ok(result)
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
