//! Dump a solved instance, read it back, and check relay and BS loading.
//!
//! Two sources with strong WiFi links into one relay, and a relay that reaches
//! the BS well on two interfaces, make the optimum share the relay channel.

use donsa::assignment::dump::{self, Dump, DumpContext};
use donsa::assignment::{audit_conflicts, donsa, restricted_quota, Restriction, SolveOptions};
use donsa::rf_model::{RfCatalog, RfClass, RfInterface};
use donsa::topology::{Node, RateTable, Role, Topology};

fn rf(id: &str, class: RfClass, cap: u32) -> RfInterface {
    RfInterface {
        id: id.into(),
        class,
        channel_bw: 200e3,
        max_rate: None,
        num_channels: 1,
        bs_total_bw: 200e3 * cap as f64,
        bs_conn_cap: cap,
        carrier_freq: 2.4e9,
        tx_power: 20.0,
    }
}

pub fn run_example() -> donsa::Result<(usize, usize)> {
    let catalog = RfCatalog::new(vec![
        rf("WiFi", RfClass::M2M, 0),
        rf("LTE", RfClass::M2B, 1),
        rf("LTE-M", RfClass::M2B, 1),
    ])?;
    let roles = [Role::Source, Role::Source, Role::Relay, Role::BaseStation];
    let nodes = roles
        .iter()
        .enumerate()
        .map(|(id, &role)| Node {
            id,
            role,
            position: (id as f64 * 10.0, 0.0),
        })
        .collect();
    let topology = Topology::from_nodes(nodes, 100.0, 100e3)?;
    // sources reach the relay well and the BS badly
    let rates = RateTable::from_fn(
        (2, 1, 1),
        1,
        2,
        |_, _, _| 9e6,
        |m, _, _| if m == 2 { 8e6 } else { 1e5 },
    );

    for repair in [false, true] {
        let opts = SolveOptions {
            repair_conflicts: repair,
            ..SolveOptions::default()
        };
        let result = donsa(&topology, &rates, &catalog, &opts)?;
        let quota = restricted_quota(
            &topology,
            &catalog,
            &Restriction::unrestricted(&catalog),
            &opts,
        );
        let text = dump::write_result(&result, &DumpContext::new(&catalog, &quota));
        let Dump::Result(back, ctx) = dump::parse(&text)? else {
            unreachable!("wrote a result dump")
        };
        let report = audit_conflicts(&back, &ctx.quota);
        println!(
            "repair {repair}: {} conflicts, objective {:.3e}",
            report.len(),
            back.objective_total
        );
        for r in &report.relay_reuse {
            println!(
                "  relay {} on {} shared by {} sources",
                r.relay, ctx.m2m_ids[r.m2m_rf], r.sources
            );
        }
        if repair {
            return Ok((report.len(), back.matched_count()));
        }
    }
    unreachable!()
}

fn main() -> donsa::Result<()> {
    run_example().map(|_| ())
}
