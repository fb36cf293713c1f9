use crate::rf_model::{rf_eligible, RfInterface};

/// Per-base-station connection quota and the resulting matching size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quota {
    /// Connections one base station accepts on each M2B interface, indexed
    /// by M2B ordinal. Zero for interfaces that cannot carry the request.
    pub per_rf: Vec<u32>,
    /// Sum of `per_rf`.
    pub total: u64,
    /// Largest number of sources that can be matched.
    pub k: usize,
    pub n_bs: usize,
    pub n_sources: usize,
}

impl Quota {
    fn from_parts(per_rf: Vec<u32>, n_bs: usize, n_sources: usize) -> Self {
        let total: u64 = per_rf.iter().map(|&q| u64::from(q)).sum();
        let capacity = (n_bs as u64).saturating_mul(total);
        let k = (n_sources as u64).min(capacity) as usize;
        Self {
            per_rf,
            total,
            k,
            n_bs,
            n_sources,
        }
    }

    /// Total connection capacity over all base stations.
    pub fn capacity(&self) -> u64 {
        self.n_bs as u64 * self.total
    }

    /// The quota with every interface outside `allowed` zeroed.
    pub fn restrict(&self, allowed: &[bool]) -> Self {
        let per_rf = self
            .per_rf
            .iter()
            .enumerate()
            .map(|(t, &q)| {
                if allowed.get(t).copied().unwrap_or(false) {
                    q
                } else {
                    0
                }
            })
            .collect();
        Self::from_parts(per_rf, self.n_bs, self.n_sources)
    }
}

/// `min(floor(bs_total_bw / requested_bw), bs_conn_cap)` per M2B interface.
///
/// Interfaces whose channel is narrower than the request get no quota. With
/// `truncate_to_sources` set, no interface is given more slots than there
/// are sources, since the surplus can never be used.
pub fn compute_quota(
    m2b: &[RfInterface],
    requested_bw: f64,
    n_bs: usize,
    n_sources: usize,
    truncate_to_sources: bool,
) -> Quota {
    assert!(requested_bw > 0.0, "requested_bw must be positive");
    let per_rf = m2b
        .iter()
        .map(|rf| {
            if !rf_eligible(rf, requested_bw) {
                return 0;
            }
            let by_bw = (rf.bs_total_bw / requested_bw).floor();
            let by_bw = if by_bw >= u32::MAX as f64 {
                u32::MAX
            } else {
                by_bw as u32
            };
            let q = by_bw.min(rf.bs_conn_cap);
            if truncate_to_sources {
                q.min(u32::try_from(n_sources).unwrap_or(u32::MAX))
            } else {
                q
            }
        })
        .collect();
    Quota::from_parts(per_rf, n_bs, n_sources)
}
