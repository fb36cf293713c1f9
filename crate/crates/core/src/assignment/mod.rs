//! Joint next-hop and interface selection as a k-cardinality assignment.
//!
//! The pipeline is: per-BS quota, vertex enumeration, padding into a square
//! instance, a maximizing Hungarian solve, and extraction of the decision
//! each source should apply.

mod audit;
mod brute_force;
pub mod dump;
mod hungarian;
mod quota;
mod sap;
mod vertices;

pub use audit::{audit_conflicts, repair_conflicts, BsOveruse, ConflictReport, RelayReuse};
pub use brute_force::{brute_force_solve, search_space, BruteForceResult, SEARCH_LIMIT};
pub use hungarian::{hungarian_solve, objective, Matrix, Sense};
pub use quota::{compute_quota, Quota};
pub use sap::{build_sap, extract_assignment, ColTag, RowTag, SapInstance};
pub use vertices::{
    edge_weight, enumerate_vertices, PairVertex, QuadrupleVertex, Restriction, Vertex, Vertices,
};

use crate::error::{Error, Result};
use crate::rf_model::RfCatalog;
use crate::topology::{RateTable, Topology};

/// What one source should do. Relay and BS are ordinals within their role,
/// interfaces are ordinals within their class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Unmatched,
    Direct {
        bs: usize,
        m2b_rf: usize,
    },
    Relayed {
        relay: usize,
        m2m_rf: usize,
        bs: usize,
        m2b_rf: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceAssignment {
    pub decision: Decision,
    /// Achieved end-to-end rate in bits/s; zero iff unmatched.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    /// Indexed by source ordinal.
    pub assignments: Vec<SourceAssignment>,
    /// Sum of the per-source rates, accumulated in source order.
    pub objective_total: f64,
    /// Matching bound the instance was solved under.
    pub k: usize,
}

impl AssignmentResult {
    pub fn new(assignments: Vec<SourceAssignment>, k: usize) -> Self {
        let objective_total = assignments.iter().map(|a| a.rate).sum();
        Self {
            assignments,
            objective_total,
            k,
        }
    }

    pub fn all_unmatched(n_sources: usize, k: usize) -> Self {
        let unmatched = SourceAssignment {
            decision: Decision::Unmatched,
            rate: 0.0,
        };
        Self::new(vec![unmatched; n_sources], k)
    }

    pub fn matched_count(&self) -> usize {
        self.assignments
            .iter()
            .filter(|a| a.decision != Decision::Unmatched)
            .count()
    }

    pub fn unmatched_count(&self) -> usize {
        self.assignments.len() - self.matched_count()
    }

    pub fn decisions(&self) -> Vec<Decision> {
        self.assignments.iter().map(|a| a.decision).collect()
    }

    pub(crate) fn unmatch(&mut self, source: usize) {
        self.assignments[source] = SourceAssignment {
            decision: Decision::Unmatched,
            rate: 0.0,
        };
        self.objective_total = self.assignments.iter().map(|a| a.rate).sum();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Cap every per-interface quota at the number of sources.
    pub truncate_channels_to_sources: bool,
    /// Run the greedy conflict repair after extraction.
    pub repair_conflicts: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            truncate_channels_to_sources: true,
            repair_conflicts: false,
        }
    }
}

/// Quota over the M2B interfaces `restriction` allows.
pub fn restricted_quota(
    topology: &Topology,
    catalog: &RfCatalog,
    restriction: &Restriction,
    options: &SolveOptions,
) -> Quota {
    compute_quota(
        catalog.m2b(),
        topology.requested_bw,
        topology.n_bs(),
        topology.n_sources(),
        options.truncate_channels_to_sources,
    )
    .restrict(&restriction.allowed_m2b)
}

fn check_shapes(topology: &Topology, rates: &RateTable, catalog: &RfCatalog) -> Result<()> {
    let expected = (topology.n_sources(), topology.n_relays(), topology.n_bs());
    if rates.dims() != expected
        || rates.n_m2m() != catalog.m2m().len()
        || rates.n_m2b() != catalog.m2b().len()
    {
        return Err(Error::InvalidArgument(format!(
            "rate table {:?} x ({}, {}) does not match topology {:?} x catalog ({}, {})",
            rates.dims(),
            rates.n_m2m(),
            rates.n_m2b(),
            expected,
            catalog.m2m().len(),
            catalog.m2b().len()
        )));
    }
    Ok(())
}

/// Runs the full pipeline on the part of the candidate space `restriction`
/// admits.
pub fn solve_restricted(
    topology: &Topology,
    rates: &RateTable,
    catalog: &RfCatalog,
    restriction: &Restriction,
    options: &SolveOptions,
) -> Result<AssignmentResult> {
    check_shapes(topology, rates, catalog)?;
    let quota = restricted_quota(topology, catalog, restriction, options);
    let vertices = enumerate_vertices(topology, catalog, &quota, restriction);
    let sap = match build_sap(topology, rates, &quota, &vertices) {
        Ok(sap) => sap,
        Err(Error::EmptyProblem) => {
            return Ok(AssignmentResult::all_unmatched(topology.n_sources(), 0))
        }
        Err(e) => return Err(e),
    };
    let perm = hungarian_solve(&sap.weights, Sense::Maximize)?;
    let mut result = extract_assignment(&sap, &perm)?;
    if options.repair_conflicts {
        repair_conflicts(&mut result, &quota);
    }
    Ok(result)
}

/// Optimal joint next-hop and interface selection over every interface.
pub fn donsa(
    topology: &Topology,
    rates: &RateTable,
    catalog: &RfCatalog,
    options: &SolveOptions,
) -> Result<AssignmentResult> {
    solve_restricted(
        topology,
        rates,
        catalog,
        &Restriction::unrestricted(catalog),
        options,
    )
}
