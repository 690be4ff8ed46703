use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Systematic encoder obtained from one Gaussian elimination of `H`.
///
/// Information bits sit at the non-pivot columns; each pivot (parity) column
/// is a GF(2) combination of the information bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderTables {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Per parity position, a bitset over information indices.
    parity_rows: Vec<Vec<u64>>,
    punctured: Vec<usize>,
    tx_positions: Vec<usize>,
    rank_deficiency: usize,
}

/// A codeword in full (punctured positions included) and transmitted form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub full: Vec<u8>,
    pub tx: Vec<u8>,
    pub message: Vec<u8>,
}

#[inline]
fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// Row-reduces `h` over GF(2). Punctured columns are tried as pivots first
/// so that information bits land on transmitted positions where possible.
pub fn build_encoder(h: &SparseMatrix, punctured: &[usize]) -> Result<EncoderTables> {
    let (m, n) = (h.n_rows(), h.n_cols());
    if h.weight() == 0 {
        return Err(Error::InvalidInput("parity-check matrix has no non-zero entries".to_string()));
    }
    if let Some(&p) = punctured.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidInput(format!("punctured column {p} out of range")));
    }
    let words = n.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = h
        .rows()
        .iter()
        .map(|row| {
            let mut w = vec![0u64; words];
            for &c in row {
                w[c / 64] |= 1 << (c % 64);
            }
            w
        })
        .collect();

    let mut is_punct = vec![false; n];
    for &p in punctured {
        is_punct[p] = true;
    }
    let order = punctured
        .iter()
        .copied()
        .chain((0..n).filter(|&c| !is_punct[c]));

    let mut pivots: Vec<usize> = Vec::with_capacity(m);
    for col in order {
        let rank = pivots.len();
        if rank == m {
            break;
        }
        let Some(found) = (rank..m).find(|&r| get_bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot, tail) = tail.split_first_mut().expect("pivot row");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            if get_bit(other, col) {
                other.iter_mut().zip(pivot.iter()).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(col);
    }

    let rank = pivots.len();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let k = info_positions.len();
    let parity_rows = rows[..rank]
        .iter()
        .map(|row| {
            let mut bits = vec![0u64; k.div_ceil(64)];
            for (j, &c) in info_positions.iter().enumerate() {
                if get_bit(row, c) {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    if rank < m {
        log::warn!(
            "parity-check matrix has rank {rank} < {m} rows; dimension grows to {k}"
        );
    }
    let mut punctured = punctured.to_vec();
    punctured.sort_unstable();
    punctured.dedup();
    let tx_positions = (0..n).filter(|&c| !is_punct[c]).collect();
    Ok(EncoderTables {
        n,
        info_positions,
        parity_positions: pivots,
        parity_rows,
        punctured,
        tx_positions,
        rank_deficiency: m - rank,
    })
}

impl EncoderTables {
    /// Message length.
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    /// Full codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_tx(&self) -> usize {
        self.n - self.punctured.len()
    }

    /// Columns carrying message bits, ascending.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    pub fn punctured(&self) -> &[usize] {
        &self.punctured
    }

    /// Number of dependent check rows.
    pub fn rank_deficiency(&self) -> usize {
        self.rank_deficiency
    }

    /// Columns actually sent over the channel, ascending.
    pub fn tx_positions(&self) -> &[usize] {
        &self.tx_positions
    }

    /// Message bits read back from a full-length word.
    pub fn extract_message(&self, full: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&i| full[i]).collect()
    }
}

pub fn encode(tables: &EncoderTables, message: &[u8]) -> Result<Codeword> {
    if message.len() != tables.k() {
        return Err(Error::InvalidInput(format!(
            "message has {} bits, encoder expects {}",
            message.len(),
            tables.k()
        )));
    }
    let mut packed = vec![0u64; message.len().div_ceil(64)];
    for (j, &b) in message.iter().enumerate() {
        packed[j / 64] |= ((b & 1) as u64) << (j % 64);
    }
    let mut full = vec![0u8; tables.n];
    for (&pos, &b) in tables.info_positions.iter().zip(message) {
        full[pos] = b & 1;
    }
    for (&pos, row) in tables.parity_positions.iter().zip(&tables.parity_rows) {
        let ones: u32 = row.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
        full[pos] = (ones & 1) as u8;
    }
    let tx = tables.tx_positions.iter().map(|&i| full[i]).collect();
    Ok(Codeword {
        full,
        tx,
        message: message.iter().map(|b| b & 1).collect(),
    })
}
