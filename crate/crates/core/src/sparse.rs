//! Sparse binary matrices stored as sorted row and column adjacency lists.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A binary matrix over GF(2) with both row and column adjacency kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl SparseMatrix {
    /// Builds a matrix from per-row column indices. Duplicate entries cancel
    /// in pairs (GF(2) addition).
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(rows.len());
        for (r, mut row) in rows.into_iter().enumerate() {
            if let Some(&c) = row.iter().find(|&&c| c >= n_cols) {
                return Err(Error::InvalidInput(format!(
                    "row {r} references column {c} of a {n_cols}-column matrix"
                )));
            }
            row.sort_unstable();
            let mut out: Vec<usize> = Vec::with_capacity(row.len());
            for c in row {
                if out.last() == Some(&c) {
                    out.pop();
                } else {
                    out.push(c);
                }
            }
            cleaned.push(out);
        }
        let mut cols = vec![Vec::new(); n_cols];
        for (r, row) in cleaned.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        Ok(SparseMatrix {
            rows: cleaned,
            cols,
        })
    }

    /// Builds a matrix from a dense 0/1 table. All rows must have equal length.
    pub fn from_dense<R: AsRef<[u8]>>(dense: &[R]) -> Result<Self> {
        let n_cols = dense.first().map_or(0, |r| r.as_ref().len());
        let mut rows = Vec::with_capacity(dense.len());
        for (r, row) in dense.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::InvalidInput(format!("row {r} has a different length")));
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b & 1 == 1)
                    .map(|(c, _)| c)
                    .collect(),
            );
        }
        Self::from_rows(n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.n_cols()]; self.n_rows()];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                out[r][c] = 1;
            }
        }
        out
    }

    /// Keeps only the columns `0..n_cols`.
    pub fn truncate_cols(&self, n_cols: usize) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().copied().filter(|&c| c < n_cols).collect())
            .collect();
        let cols = self.cols[..n_cols.min(self.n_cols())].to_vec();
        SparseMatrix { rows, cols }
    }

    /// `H · xᵀ` over GF(2). `x` holds one bit per column (low bit used).
    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        self.rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, x: &[u8]) -> bool {
        x.len() == self.n_cols()
            && self
                .rows
                .iter()
                .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ (x[c] & 1)) == 0)
    }
}
