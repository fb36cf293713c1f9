//! Random tiny instances checked against the exhaustive solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::{brute_force_solve, donsa, restricted_quota, Restriction, SolveOptions};
use crate::error::Result;
use crate::rf_model::{RfCatalog, RfClass, RfInterface};
use crate::topology::{Node, RateTable, Role, Topology};

pub const TINY_REQUESTED_BW: f64 = 100e3;

#[derive(Debug, Clone)]
pub struct TinyInstance {
    pub topology: Topology,
    pub rates: RateTable,
    pub catalog: RfCatalog,
}

fn rf(id: String, class: RfClass, eligible: bool, cap: u32) -> RfInterface {
    let channel_bw = if eligible { 200e3 } else { 50e3 };
    RfInterface {
        id,
        class,
        channel_bw,
        max_rate: None,
        num_channels: 1,
        bs_total_bw: if class == RfClass::M2B {
            channel_bw * cap as f64
        } else {
            0.0
        },
        bs_conn_cap: if class == RfClass::M2B { cap } else { 0 },
        carrier_freq: 2.4e9,
        tx_power: 20.0,
    }
}

/// Up to 4 sources, 2 relays, one BS and two interfaces per class, with
/// integer rates so objective sums are exact. About one interface in eight
/// is too narrow for the request.
pub fn random_tiny_instance<R: Rng + ?Sized>(rng: &mut R) -> TinyInstance {
    let n_s = rng.random_range(1..=4);
    let n_r = rng.random_range(0..=2);
    let mut interfaces = Vec::new();
    for t in 0..rng.random_range(1..=2) {
        interfaces.push(rf(format!("m{t}"), RfClass::M2M, rng.random_bool(0.875), 0));
    }
    for t in 0..rng.random_range(1..=2) {
        let cap = rng.random_range(1..=3);
        interfaces.push(rf(
            format!("b{t}"),
            RfClass::M2B,
            rng.random_bool(0.875),
            cap,
        ));
    }
    let catalog = RfCatalog::new(interfaces).expect("generated catalog is valid");
    let mut nodes = Vec::new();
    for (i, role) in std::iter::repeat_n(Role::Source, n_s)
        .chain(std::iter::repeat_n(Role::Relay, n_r))
        .chain(std::iter::once(Role::BaseStation))
        .enumerate()
    {
        nodes.push(Node {
            id: i,
            role,
            position: (i as f64, 0.0),
        });
    }
    let topology =
        Topology::from_nodes(nodes, 100.0, TINY_REQUESTED_BW).expect("generated topology is valid");
    let draw = |rng: &mut R| -> f64 {
        if rng.random_bool(0.2) {
            0.0
        } else {
            rng.random_range(1..=1000) as f64
        }
    };
    let m2m: Vec<f64> = (0..n_s * n_r * catalog.m2m().len())
        .map(|_| draw(rng))
        .collect();
    let m2b: Vec<f64> = (0..(n_s + n_r) * catalog.m2b().len())
        .map(|_| draw(rng))
        .collect();
    let (tm, tb) = (catalog.m2m().len(), catalog.m2b().len());
    let rates = RateTable::from_fn(
        (n_s, n_r, 1),
        tm,
        tb,
        |s, r, t| m2m[(s * n_r + r) * tm + t],
        |m, _, t| m2b[m * tb + t],
    );
    TinyInstance {
        topology,
        rates,
        catalog,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub instance: usize,
    pub pipeline: f64,
    pub exhaustive: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub instances: usize,
    pub mismatches: Vec<Mismatch>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn run_selftest(count: usize, seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SolveOptions::default();
    let mut mismatches = Vec::new();
    for i in 0..count {
        let inst = random_tiny_instance(&mut rng);
        let fast = donsa(&inst.topology, &inst.rates, &inst.catalog, &opts)?;
        let restriction = Restriction::unrestricted(&inst.catalog);
        let quota = restricted_quota(&inst.topology, &inst.catalog, &restriction, &opts);
        let slow = brute_force_solve(
            &inst.topology,
            &inst.rates,
            &inst.catalog,
            &quota,
            &restriction,
        )?;
        if fast.objective_total != slow.objective {
            mismatches.push(Mismatch {
                instance: i,
                pipeline: fast.objective_total,
                exhaustive: slow.objective,
            });
        }
    }
    Ok(SelftestReport {
        instances: count,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_instances_agree() {
        let r = run_selftest(50, 11).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert_eq!(r.instances, 50);
    }

    #[test]
    fn generator_stays_tiny() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let t = random_tiny_instance(&mut rng);
            assert!(t.topology.n_sources() <= 4 && t.topology.n_relays() <= 2);
            assert!(t.catalog.m2m().len() <= 2 && t.catalog.m2b().len() <= 2);
            assert!(t.catalog.m2b().iter().all(|b| b.bs_conn_cap <= 3));
        }
    }
}
