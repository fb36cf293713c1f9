//! Resource-composition checks the optimizer itself does not enforce.
//!
//! The matching only bounds the total number of connections. It does not
//! stop two sources from sharing one relay's M2M channel, nor a (BS, M2B)
//! pair from being loaded past its own quota by relayed traffic.

use std::collections::BTreeMap;

use super::quota::Quota;
use super::{AssignmentResult, Decision};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayReuse {
    pub relay: usize,
    pub m2m_rf: usize,
    pub sources: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsOveruse {
    pub bs: usize,
    pub m2b_rf: usize,
    pub used: usize,
    pub quota: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConflictReport {
    pub relay_reuse: Vec<RelayReuse>,
    pub bs_overuse: Vec<BsOveruse>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.relay_reuse.is_empty() && self.bs_overuse.is_empty()
    }

    pub fn len(&self) -> usize {
        self.relay_reuse.len() + self.bs_overuse.len()
    }
}

pub fn audit_conflicts(result: &AssignmentResult, quota: &Quota) -> ConflictReport {
    let mut relay_use: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut bs_use: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for a in &result.assignments {
        match a.decision {
            Decision::Unmatched => {}
            Decision::Direct { bs, m2b_rf } => *bs_use.entry((bs, m2b_rf)).or_default() += 1,
            Decision::Relayed {
                relay,
                m2m_rf,
                bs,
                m2b_rf,
            } => {
                *relay_use.entry((relay, m2m_rf)).or_default() += 1;
                *bs_use.entry((bs, m2b_rf)).or_default() += 1;
            }
        }
    }
    ConflictReport {
        relay_reuse: relay_use
            .into_iter()
            .filter(|&(_, n)| n > 1)
            .map(|((relay, m2m_rf), sources)| RelayReuse {
                relay,
                m2m_rf,
                sources,
            })
            .collect(),
        bs_overuse: bs_use
            .into_iter()
            .filter_map(|((bs, m2b_rf), used)| {
                let q = quota.per_rf.get(m2b_rf).copied().unwrap_or(0);
                (used > q as usize).then_some(BsOveruse {
                    bs,
                    m2b_rf,
                    used,
                    quota: q,
                })
            })
            .collect(),
    }
}

/// Greedily unmatches the lowest-rate source involved in a conflict until
/// the report is empty. Returns the number of sources dropped.
pub fn repair_conflicts(result: &mut AssignmentResult, quota: &Quota) -> usize {
    let mut dropped = 0;
    loop {
        let report = audit_conflicts(result, quota);
        if report.is_empty() {
            return dropped;
        }
        let involved = |d: &Decision| match *d {
            Decision::Unmatched => false,
            Decision::Direct { bs, m2b_rf } => report
                .bs_overuse
                .iter()
                .any(|o| o.bs == bs && o.m2b_rf == m2b_rf),
            Decision::Relayed {
                relay,
                m2m_rf,
                bs,
                m2b_rf,
            } => {
                report
                    .relay_reuse
                    .iter()
                    .any(|r| r.relay == relay && r.m2m_rf == m2m_rf)
                    || report
                        .bs_overuse
                        .iter()
                        .any(|o| o.bs == bs && o.m2b_rf == m2b_rf)
            }
        };
        let victim = result
            .assignments
            .iter()
            .enumerate()
            .filter(|(_, a)| involved(&a.decision))
            .min_by(|a, b| a.1.rate.total_cmp(&b.1.rate).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .expect("a conflict involves at least one source");
        result.unmatch(victim);
        dropped += 1;
    }
}
