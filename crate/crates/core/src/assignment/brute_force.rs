//! Exhaustive reference solver for small instances.
//!
//! Enumerates every injective mapping of sources onto relay routes, direct
//! slots or "unmatched", with at most `k` sources matched. It shares no code
//! with the padded Hungarian route beyond the rate table itself.

use super::quota::Quota;
use super::vertices::Restriction;
use super::{AssignmentResult, Decision, SourceAssignment};
use crate::error::{Error, Result};
use crate::rf_model::{rf_eligible, RfCatalog};
use crate::topology::{RateTable, Topology};

/// Largest search space [`brute_force_solve`] accepts.
pub const SEARCH_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub objective: f64,
    pub assignment: AssignmentResult,
    /// Number of complete candidate assignments visited.
    pub visited: u64,
}

struct Candidate {
    decision: Decision,
    /// rate for each source
    rates: Vec<f64>,
}

/// Number of injective partial maps of `n_s` sources into `cols` columns
/// matching at most `k` sources.
pub fn search_space(n_s: usize, cols: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    for m in 0..=k.min(n_s).min(cols) {
        let choose = (0..m).fold(1u128, |acc, i| acc * (n_s - i) as u128 / (i as u128 + 1));
        let arrange = (0..m).fold(1u128, |acc, i| acc.saturating_mul((cols - i) as u128));
        total = total.saturating_add(choose.saturating_mul(arrange));
    }
    total
}

pub fn brute_force_solve(
    topology: &Topology,
    rates: &RateTable,
    catalog: &RfCatalog,
    quota: &Quota,
    restriction: &Restriction,
) -> Result<BruteForceResult> {
    let n_s = topology.n_sources();
    let bw = topology.requested_bw;
    let usable_m2m = |t: usize| restriction.allowed_m2m[t] && rf_eligible(&catalog.m2m()[t], bw);
    let usable_m2b = |t: usize| restriction.allowed_m2b[t] && rf_eligible(&catalog.m2b()[t], bw);

    let mut cands = Vec::new();
    if restriction.relays_enabled {
        for relay in 0..topology.n_relays() {
            for m2m_rf in (0..catalog.m2m().len()).filter(|&t| usable_m2m(t)) {
                for bs in 0..topology.n_bs() {
                    for m2b_rf in (0..catalog.m2b().len()).filter(|&t| usable_m2b(t)) {
                        let second = rates.relay_m2b(relay, bs, m2b_rf);
                        cands.push(Candidate {
                            decision: Decision::Relayed {
                                relay,
                                m2m_rf,
                                bs,
                                m2b_rf,
                            },
                            rates: (0..n_s)
                                .map(|s| {
                                    let first = rates.m2m(s, relay, m2m_rf);
                                    if first < second {
                                        first
                                    } else {
                                        second
                                    }
                                })
                                .collect(),
                        });
                    }
                }
            }
        }
    }
    if restriction.direct_enabled {
        for bs in 0..topology.n_bs() {
            for m2b_rf in (0..catalog.m2b().len()).filter(|&t| usable_m2b(t)) {
                for _slot in 0..quota.per_rf[m2b_rf] {
                    cands.push(Candidate {
                        decision: Decision::Direct { bs, m2b_rf },
                        rates: (0..n_s).map(|s| rates.m2b(s, bs, m2b_rf)).collect(),
                    });
                }
            }
        }
    }

    let size = search_space(n_s, cands.len(), quota.k);
    if size > SEARCH_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            size,
            limit: SEARCH_LIMIT,
        });
    }

    let mut search = Search {
        cands: &cands,
        k: quota.k,
        used: vec![false; cands.len()],
        current: vec![None; n_s],
        best: None,
        visited: 0,
    };
    search.go(0, 0);
    let (objective, choice) = search
        .best
        .expect("the all-unmatched map is always visited");

    let assignments = choice
        .iter()
        .enumerate()
        .map(|(s, c)| match c {
            Some(j) if cands[*j].rates[s] > 0.0 => SourceAssignment {
                decision: cands[*j].decision,
                rate: cands[*j].rates[s],
            },
            _ => SourceAssignment {
                decision: Decision::Unmatched,
                rate: 0.0,
            },
        })
        .collect();
    Ok(BruteForceResult {
        objective,
        assignment: AssignmentResult::new(assignments, quota.k.min(cands.len())),
        visited: search.visited,
    })
}

struct Search<'a> {
    cands: &'a [Candidate],
    k: usize,
    used: Vec<bool>,
    current: Vec<Option<usize>>,
    best: Option<(f64, Vec<Option<usize>>)>,
    visited: u64,
}

impl Search<'_> {
    fn go(&mut self, s: usize, matched: usize) {
        if s == self.current.len() {
            self.visited += 1;
            // summed in source order, zero for the unmatched
            let total: f64 = self
                .current
                .iter()
                .enumerate()
                .map(|(s, c)| c.map_or(0.0, |j| self.cands[j].rates[s]))
                .sum();
            if self.best.as_ref().is_none_or(|(b, _)| total > *b) {
                self.best = Some((total, self.current.clone()));
            }
            return;
        }
        self.current[s] = None;
        self.go(s + 1, matched);
        if matched == self.k {
            return;
        }
        for j in 0..self.cands.len() {
            if !self.used[j] {
                self.used[j] = true;
                self.current[s] = Some(j);
                self.go(s + 1, matched + 1);
                self.used[j] = false;
            }
        }
        self.current[s] = None;
    }
}
