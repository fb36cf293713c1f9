//! Dense linear sum assignment by shortest augmenting paths.
//!
//! Each row is inserted with one Dijkstra-style search over reduced costs,
//! for O(n^3) total. Rows are processed in index order and, among columns
//! of equal path cost, the first free one in scan order wins, else the
//! first scanned. That scan order is the solver's only tie-break.

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, fill: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::NonSquare {
                rows: rows.len(),
                cols: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Sum of `weights[i][perm[i]]`.
pub fn objective(weights: &Matrix, perm: &[usize]) -> f64 {
    perm.iter()
        .enumerate()
        .map(|(i, &j)| weights.get(i, j))
        .sum()
}

const NONE: usize = usize::MAX;

/// Optimal permutation `row -> column` of a square matrix.
pub fn hungarian_solve(weights: &Matrix, sense: Sense) -> Result<Vec<usize>> {
    if weights.rows != weights.cols {
        return Err(Error::NonSquare {
            rows: weights.rows,
            cols: weights.cols,
        });
    }
    if let Some(pos) = weights.data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: pos / weights.cols,
            col: pos % weights.cols,
        });
    }
    let n = weights.rows;
    let sign = match sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let cost = |i: usize, j: usize| sign * weights.data[i * n + j];

    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut col4row = vec![NONE; n];
    let mut row4col = vec![NONE; n];
    let mut path = vec![NONE; n];
    let mut shortest = vec![f64::INFINITY; n];
    let mut visited_rows = vec![false; n];
    let mut visited_cols = vec![false; n];
    let mut remaining: Vec<usize> = Vec::with_capacity(n);

    for cur_row in 0..n {
        remaining.clear();
        remaining.extend(0..n);
        shortest.fill(f64::INFINITY);
        visited_rows.fill(false);
        visited_cols.fill(false);

        let mut min_val = 0.0;
        let mut i = cur_row;
        let sink = loop {
            visited_rows[i] = true;
            let mut index = NONE;
            let mut lowest = f64::INFINITY;
            let mut lowest_free = false;
            let base = min_val - u[i];
            for (it, &j) in remaining.iter().enumerate() {
                let r = base + cost(i, j) - v[j];
                if r < shortest[j] {
                    path[j] = i;
                    shortest[j] = r;
                }
                let free = row4col[j] == NONE;
                if shortest[j] < lowest || (shortest[j] == lowest && free && !lowest_free) {
                    lowest = shortest[j];
                    lowest_free = free;
                    index = it;
                }
            }
            // finite costs always leave a reachable column
            debug_assert!(index != NONE);
            min_val = lowest;
            let j = remaining.swap_remove(index);
            visited_cols[j] = true;
            if row4col[j] == NONE {
                break j;
            }
            i = row4col[j];
        };

        u[cur_row] += min_val;
        for r in 0..n {
            if visited_rows[r] && r != cur_row {
                u[r] += min_val - shortest[col4row[r]];
            }
        }
        for c in 0..n {
            if visited_cols[c] {
                v[c] -= min_val - shortest[c];
            }
        }

        let mut j = sink;
        loop {
            let r = path[j];
            row4col[j] = r;
            std::mem::swap(&mut col4row[r], &mut j);
            if r == cur_row {
                break;
            }
        }
    }
    Ok(col4row)
}
