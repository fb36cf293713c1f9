//! Right-hand vertices of the bipartite graph: relay routes and direct slots.

use super::quota::Quota;
use crate::rf_model::{df_two_hop_rate, rf_eligible, RfCatalog};
use crate::topology::{RateTable, Topology};

/// A two-hop route: source -> relay over an M2M interface, relay -> BS over
/// an M2B interface. Relay and BS are ordinals within their role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadrupleVertex {
    pub relay: usize,
    pub m2m_rf: usize,
    pub bs: usize,
    pub m2b_rf: usize,
}

/// One connection slot of a (BS, M2B interface) pair for direct uplink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairVertex {
    pub bs: usize,
    pub m2b_rf: usize,
    pub channel: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Quadruple(QuadrupleVertex),
    Pair(PairVertex),
}

/// Which parts of the candidate space an algorithm may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub allowed_m2m: Vec<bool>,
    pub allowed_m2b: Vec<bool>,
    pub relays_enabled: bool,
    pub direct_enabled: bool,
}

impl Restriction {
    pub fn unrestricted(catalog: &RfCatalog) -> Self {
        Self {
            allowed_m2m: vec![true; catalog.m2m().len()],
            allowed_m2b: vec![true; catalog.m2b().len()],
            relays_enabled: true,
            direct_enabled: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vertices {
    pub quadruples: Vec<QuadrupleVertex>,
    pub pairs: Vec<PairVertex>,
}

impl Vertices {
    pub fn len(&self) -> usize {
        self.quadruples.len() + self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadruples first, then pairs.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.quadruples
            .iter()
            .copied()
            .map(Vertex::Quadruple)
            .chain(self.pairs.iter().copied().map(Vertex::Pair))
    }
}

/// Enumerates relay routes over eligible interfaces and `Q^t` direct slots
/// per (BS, M2B interface), both in lexicographic order.
pub fn enumerate_vertices(
    topology: &Topology,
    catalog: &RfCatalog,
    quota: &Quota,
    restriction: &Restriction,
) -> Vertices {
    let bw = topology.requested_bw;
    let m2m: Vec<usize> = catalog
        .m2m()
        .iter()
        .enumerate()
        .filter(|(t, rf)| restriction.allowed_m2m[*t] && rf_eligible(rf, bw))
        .map(|(t, _)| t)
        .collect();
    let m2b: Vec<usize> = catalog
        .m2b()
        .iter()
        .enumerate()
        .filter(|(t, rf)| restriction.allowed_m2b[*t] && rf_eligible(rf, bw))
        .map(|(t, _)| t)
        .collect();

    let mut out = Vertices::default();
    if restriction.relays_enabled {
        out.quadruples
            .reserve(topology.n_relays() * m2m.len() * topology.n_bs() * m2b.len());
        for relay in 0..topology.n_relays() {
            for &m2m_rf in &m2m {
                for bs in 0..topology.n_bs() {
                    for &m2b_rf in &m2b {
                        out.quadruples.push(QuadrupleVertex {
                            relay,
                            m2m_rf,
                            bs,
                            m2b_rf,
                        });
                    }
                }
            }
        }
    }
    if restriction.direct_enabled {
        for bs in 0..topology.n_bs() {
            for &m2b_rf in &m2b {
                for channel in 0..quota.per_rf[m2b_rf] {
                    out.pairs.push(PairVertex {
                        bs,
                        m2b_rf,
                        channel,
                    });
                }
            }
        }
    }
    out
}

/// Rate source `s` achieves through `vertex`.
pub fn edge_weight(s: usize, vertex: Vertex, rates: &RateTable) -> f64 {
    match vertex {
        Vertex::Quadruple(q) => df_two_hop_rate(
            rates.m2m(s, q.relay, q.m2m_rf),
            rates.relay_m2b(q.relay, q.bs, q.m2b_rf),
        ),
        Vertex::Pair(p) => rates.m2b(s, p.bs, p.m2b_rf),
    }
}
