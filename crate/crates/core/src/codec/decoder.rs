use alloc::vec;
use alloc::vec::Vec;

use super::LlrVector;
use crate::sparse::SparseMatrix;

pub const DEFAULT_MAX_ITER: usize = 50;

/// Magnitude limit applied to variable-to-check messages before the tanh rule.
pub const LLR_CLIP: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Full-length hard decisions.
    pub hard: Vec<u8>,
    /// The syndrome of `hard` is zero.
    pub converged: bool,
    pub iterations: usize,
}

/// Sign decisions of `llr`; an LLR of exactly 0 decides bit 0.
pub fn hard_decision(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&x| (x < 0.0) as u8).collect()
}

/// Log-domain sum-product decoder with a flooding schedule.
///
/// The edge layout is built once per matrix; each [`BpDecoder::decode`] call
/// allocates its own message buffers.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    /// Edge `e` of check `r` lives at `check_start[r]..check_start[r + 1]`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edges of each variable node.
    var_edges: Vec<Vec<usize>>,
}

impl BpDecoder {
    pub fn new(h: &SparseMatrix) -> Self {
        let mut check_start = Vec::with_capacity(h.n_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.weight());
        let mut var_edges = vec![Vec::new(); h.n_cols()];
        check_start.push(0);
        for row in h.rows() {
            for &c in row {
                var_edges[c].push(edge_var.len());
                edge_var.push(c);
            }
            check_start.push(edge_var.len());
        }
        BpDecoder {
            n: h.n_cols(),
            check_start,
            edge_var,
            var_edges,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Decodes `llr` for at most `max_iter` iterations, stopping early once
    /// the hard decision satisfies every check.
    pub fn decode(&self, llr: &LlrVector, max_iter: usize) -> DecodeResult {
        let llr = llr.values();
        assert_eq!(llr.len(), self.n, "LLR length must match the code length");
        let max_iter = max_iter.max(1);
        let n_edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| llr[v]).collect();
        let mut c2v = vec![0.0f64; n_edges];
        let mut tanhs = vec![0.0f64; n_edges];
        let mut hard = vec![0u8; self.n];
        let tanh_clip = libm::tanh(LLR_CLIP / 2.0);

        for iter in 1..=max_iter {
            for r in 0..self.check_start.len() - 1 {
                let (lo, hi) = (self.check_start[r], self.check_start[r + 1]);
                for e in lo..hi {
                    tanhs[e] = libm::tanh(v2c[e].clamp(-LLR_CLIP, LLR_CLIP) / 2.0);
                }
                // Extrinsic products via a forward pass then a backward pass.
                let mut prefix = 1.0;
                for e in lo..hi {
                    c2v[e] = prefix;
                    prefix *= tanhs[e];
                }
                let mut suffix = 1.0;
                for e in (lo..hi).rev() {
                    let prod = (c2v[e] * suffix).clamp(-tanh_clip, tanh_clip);
                    c2v[e] = 2.0 * libm::atanh(prod);
                    suffix *= tanhs[e];
                }
            }
            for (v, edges) in self.var_edges.iter().enumerate() {
                let total = llr[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                for &e in edges {
                    v2c[e] = total - c2v[e];
                }
                hard[v] = (total < 0.0) as u8;
            }
            if self.syndrome_is_zero(&hard) {
                return DecodeResult {
                    hard,
                    converged: true,
                    iterations: iter,
                };
            }
        }
        DecodeResult {
            hard,
            converged: false,
            iterations: max_iter,
        }
    }

    fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        self.check_start.windows(2).all(|w| {
            self.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ bits[v])
                == 0
        })
    }
}

/// One-shot sum-product decode of `llr` on `h`.
pub fn bp_decode(h: &SparseMatrix, llr: &LlrVector, max_iter: usize) -> DecodeResult {
    BpDecoder::new(h).decode(llr, max_iter)
}
