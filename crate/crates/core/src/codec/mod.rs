//! Encoding, channel LLRs and belief-propagation decoding.
//!
//! Bits are carried as `u8` values 0/1. BPSK maps bit 0 to `+1` and bit 1 to
//! `-1`, so a positive LLR favours bit 0.

mod decoder;
mod encoder;

pub use decoder::{bp_decode, hard_decision, BpDecoder, DecodeResult, DEFAULT_MAX_ITER, LLR_CLIP};
pub use encoder::{build_encoder, encode, Codeword, EncoderTables};

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Channel LLR of a coherently detected BPSK sample: `2 r a / sigma2`.
pub fn channel_llr(r: f64, gain: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidInput(format!("noise variance {sigma2} must be positive")));
    }
    Ok(2.0 * r * gain / sigma2)
}

/// One LLR per full-codeword position; punctured positions hold exactly 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Wraps `values` and zeroes the punctured positions.
    pub fn new(mut values: Vec<f64>, punctured: &[usize]) -> Result<Self> {
        for &p in punctured {
            let slot = values
                .get_mut(p)
                .ok_or_else(|| Error::InvalidInput(format!("punctured index {p} out of range")))?;
            *slot = 0.0;
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("LLR {i} is not finite")));
        }
        Ok(LlrVector(values))
    }

    /// Expands transmitted-position LLRs into a full vector with zeros at
    /// the punctured positions. `punctured` must be sorted.
    pub fn from_transmitted(tx: &[f64], n_total: usize, punctured: &[usize]) -> Result<Self> {
        if tx.len() + punctured.len() != n_total {
            return Err(Error::InvalidInput(format!(
                "{} transmitted LLRs and {} punctured positions do not make {n_total}",
                tx.len(),
                punctured.len()
            )));
        }
        let mut full = Vec::with_capacity(n_total);
        let mut tx = tx.iter();
        let mut punct = punctured.iter().peekable();
        for i in 0..n_total {
            if punct.peek() == Some(&&i) {
                punct.next();
                full.push(0.0);
            } else {
                full.push(*tx.next().unwrap_or(&0.0));
            }
        }
        Self::new(full, &[])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        LlrVector(self.0.iter().map(|x| x * factor).collect())
    }
}
