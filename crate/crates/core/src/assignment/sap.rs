//! Padding the k-cardinality problem into a square assignment problem, and
//! reading the decision back out of the solved permutation.
//!
//! With `R` real columns and `k` the matching bound, `R - k` dummy rows are
//! added whose edges to every real column weigh `a_value`, more than any
//! feasible real objective. In the optimum they absorb all but `k` real
//! columns. `N_s - k` dummy columns with zero weight let the remaining
//! sources go unmatched. The matrix is square with `n = N_s + R - k`.

use super::hungarian::Matrix;
use super::quota::Quota;
use super::vertices::{edge_weight, PairVertex, QuadrupleVertex, Vertex, Vertices};
use super::{AssignmentResult, Decision, SourceAssignment};
use crate::error::{Error, Result};
use crate::topology::{RateTable, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    Source(usize),
    Dummy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColTag {
    Quadruple(QuadrupleVertex),
    Pair(PairVertex),
    Dummy,
}

impl ColTag {
    pub fn is_real(self) -> bool {
        !matches!(self, ColTag::Dummy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SapInstance {
    pub weights: Matrix,
    pub row_meta: Vec<RowTag>,
    pub col_meta: Vec<ColTag>,
    pub a_value: f64,
    pub k: usize,
}

impl SapInstance {
    pub fn dim(&self) -> usize {
        self.row_meta.len()
    }

    pub fn n_sources(&self) -> usize {
        self.row_meta
            .iter()
            .filter(|r| matches!(r, RowTag::Source(_)))
            .count()
    }

    pub fn real_cols(&self) -> usize {
        self.col_meta.iter().filter(|c| c.is_real()).count()
    }

    pub fn dummy_rows(&self) -> usize {
        self.dim() - self.n_sources()
    }

    pub fn dummy_cols(&self) -> usize {
        self.dim() - self.real_cols()
    }
}

/// Builds the padded square instance. Rows are the sources followed by the
/// dummy rows; columns are the vertices in enumeration order followed by the
/// dummy columns.
pub fn build_sap(
    topology: &Topology,
    rates: &RateTable,
    quota: &Quota,
    vertices: &Vertices,
) -> Result<SapInstance> {
    let n_s = topology.n_sources();
    let real = vertices.len();
    if n_s == 0 || real == 0 {
        return Err(Error::EmptyProblem);
    }
    // without direct slots there can be fewer real columns than the quota
    let k = quota.k.min(real);
    let n = n_s + real - k;

    let mut weights = Matrix::new(n, n, 0.0);
    let mut total = 0.0;
    for s in 0..n_s {
        let row = weights.row_mut(s);
        for (j, v) in vertices.iter().enumerate() {
            let w = edge_weight(s, v, rates);
            row[j] = w;
            total += w;
        }
    }
    let a_value = 1.0 + total;
    for r in n_s..n {
        weights.row_mut(r)[..real].fill(a_value);
    }

    let row_meta = (0..n_s)
        .map(RowTag::Source)
        .chain(std::iter::repeat_n(RowTag::Dummy, n - n_s))
        .collect();
    let col_meta = vertices
        .iter()
        .map(|v| match v {
            Vertex::Quadruple(q) => ColTag::Quadruple(q),
            Vertex::Pair(p) => ColTag::Pair(p),
        })
        .chain(std::iter::repeat_n(ColTag::Dummy, n - real))
        .collect();
    Ok(SapInstance {
        weights,
        row_meta,
        col_meta,
        a_value,
        k,
    })
}

/// Maps each source row's column back to a routing decision.
///
/// A source whose matched edge carries zero rate is reported unmatched.
pub fn extract_assignment(sap: &SapInstance, perm: &[usize]) -> Result<AssignmentResult> {
    let n = sap.dim();
    if perm.len() != n {
        return Err(Error::InvalidArgument(format!(
            "permutation of length {} for a {n}x{n} instance",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &c in perm {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
    }
    let mut assignments = Vec::with_capacity(sap.n_sources());
    for (row, tag) in sap.row_meta.iter().enumerate() {
        let RowTag::Source(_) = tag else { continue };
        let col = perm[row];
        let rate = sap.weights.get(row, col);
        let decision = match sap.col_meta[col] {
            _ if rate <= 0.0 => Decision::Unmatched,
            ColTag::Dummy => Decision::Unmatched,
            ColTag::Quadruple(q) => Decision::Relayed {
                relay: q.relay,
                m2m_rf: q.m2m_rf,
                bs: q.bs,
                m2b_rf: q.m2b_rf,
            },
            ColTag::Pair(p) => Decision::Direct {
                bs: p.bs,
                m2b_rf: p.m2b_rf,
            },
        };
        let rate = if decision == Decision::Unmatched {
            0.0
        } else {
            rate
        };
        assignments.push(SourceAssignment { decision, rate });
    }
    Ok(AssignmentResult::new(assignments, sap.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::hungarian::{hungarian_solve, Sense};
    use crate::assignment::quota::compute_quota;
    use crate::assignment::vertices::{enumerate_vertices, Restriction};
    use crate::rf_model::{RfCatalog, RfInterface};
    use crate::topology::generate_cell;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// One M2M and one M2B interface whose quota is `q` at 200 kHz.
    fn tiny_catalog(q: u32) -> RfCatalog {
        let def = RfCatalog::default_catalog();
        let wifi = def.m2m()[2].clone();
        let lte = RfInterface {
            bs_conn_cap: q,
            ..def.m2b()[2].clone()
        };
        RfCatalog::new(vec![wifi, lte]).unwrap()
    }

    fn instance(n_s: usize, n_r: usize, q: u32) -> (Topology, RateTable, Quota, Vertices) {
        let cat = tiny_catalog(q);
        let t =
            generate_cell(n_s, n_r, 1, 100.0, 200e3, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let rates = RateTable::from_fn(
            (n_s, n_r, 1),
            1,
            1,
            |s, r, _| (1 + s * 3 + r) as f64,
            |m, _, _| (10 + m) as f64,
        );
        let quota = compute_quota(cat.m2b(), 200e3, 1, n_s, false);
        let v = enumerate_vertices(&t, &cat, &quota, &Restriction::unrestricted(&cat));
        (t, rates, quota, v)
    }

    #[test]
    fn padding_when_sources_exceed_capacity() {
        // R = 1 + 2, k = 2, n = 4 + 3 - 2
        let (t, rates, quota, v) = instance(4, 1, 2);
        let sap = build_sap(&t, &rates, &quota, &v).unwrap();
        assert_eq!((sap.real_cols(), sap.k, sap.dim()), (3, 2, 5));
        assert_eq!(sap.dummy_rows(), 1);
        assert_eq!(sap.dummy_cols(), 2);
    }

    #[test]
    fn padding_when_capacity_exceeds_sources() {
        // N_q = 4, Q = 5: R = 9, k = 2, only dummy rows
        let (t, rates, quota, v) = instance(2, 4, 5);
        let sap = build_sap(&t, &rates, &quota, &v).unwrap();
        assert_eq!(sap.dummy_cols(), 0);
        assert_eq!(sap.dummy_rows(), 7);
        assert_eq!(sap.dim(), 9);
    }

    #[test]
    fn a_value_dominates_real_weights() {
        let (t, rates, quota, v) = instance(4, 2, 3);
        let sap = build_sap(&t, &rates, &quota, &v).unwrap();
        let mut sum = 0.0;
        for (r, tag) in sap.row_meta.iter().enumerate() {
            for (c, col) in sap.col_meta.iter().enumerate() {
                let w = sap.weights.get(r, c);
                match (tag, col) {
                    (RowTag::Source(_), ColTag::Dummy) | (RowTag::Dummy, ColTag::Dummy) => {
                        assert_eq!(w, 0.0)
                    }
                    (RowTag::Dummy, _) => assert_eq!(w, sap.a_value),
                    (RowTag::Source(_), _) => sum += w,
                }
            }
        }
        assert!(sap.a_value > sum);
    }

    #[test]
    fn empty_problems() {
        let (t, rates, quota, _) = instance(0, 2, 3);
        let cat = tiny_catalog(3);
        let v = enumerate_vertices(&t, &cat, &quota, &Restriction::unrestricted(&cat));
        assert!(matches!(
            build_sap(&t, &rates, &quota, &v),
            Err(Error::EmptyProblem)
        ));
        let (t, rates, quota, _) = instance(3, 0, 0);
        assert!(matches!(
            build_sap(&t, &rates, &quota, &Vertices::default()),
            Err(Error::EmptyProblem)
        ));
    }

    #[test]
    fn dummy_column_means_unmatched() {
        let (t, rates, quota, v) = instance(4, 1, 2);
        let sap = build_sap(&t, &rates, &quota, &v).unwrap();
        let perm = hungarian_solve(&sap.weights, Sense::Maximize).unwrap();
        let res = extract_assignment(&sap, &perm).unwrap();
        assert_eq!(res.matched_count(), 2);
        for (row, a) in res.assignments.iter().enumerate() {
            if sap.col_meta[perm[row]] == ColTag::Dummy {
                assert_eq!(a.decision, Decision::Unmatched);
                assert_eq!(a.rate, 0.0);
            }
        }
        // every dummy row sits on a real column
        for &c in &perm[sap.n_sources()..] {
            assert!(sap.col_meta[c].is_real());
        }
    }

    #[test]
    fn quadruple_column_means_relayed() {
        let (t, rates, quota, v) = instance(1, 1, 1);
        let sap = build_sap(&t, &rates, &quota, &v).unwrap();
        // column 0 is the only quadruple
        let perm: Vec<usize> = (0..sap.dim()).collect();
        let res = extract_assignment(&sap, &perm).unwrap();
        assert_eq!(
            res.assignments[0].decision,
            Decision::Relayed {
                relay: 0,
                m2m_rf: 0,
                bs: 0,
                m2b_rf: 0
            }
        );
        assert_eq!(res.assignments[0].rate, 1.0);
        assert!(extract_assignment(&sap, &[0, 0]).is_err());
    }
}
