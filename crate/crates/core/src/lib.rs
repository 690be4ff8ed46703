//! Adaptive protograph QC-LDPC codes for distributed transmit beamforming.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the algorithmic side:
//!
//! - [`protograph`]: AR4JA rate family, node appending, lifting-order arithmetic
//!   and copy-and-permute lifting into a quasi-cyclic parity-check matrix.
//! - [`tanner`]: Tanner graphs, exact girth and shortest-cycle counts, plus a
//!   circulant fast path.
//! - [`optimizer`]: compact genetic algorithm over circulant shifts, keyed
//!   deterministic construction and truncation for off-family rates.
//! - [`codec`]: GF(2) systematic encoder with puncturing, channel LLRs and
//!   sum-product belief propagation.
//! - [`channel`]: ideally synchronized DTB over i.i.d. Rayleigh fading.
//! - [`analytics`]: closed-form BER expressions used as oracles.
//! - [`sim`]: single-frame Monte Carlo kernels with counter-based streams.
//!
//! File formats, campaigns and the command-line tool live in the `pldpc` crate.
#![no_std]

extern crate alloc;

pub mod analytics;
pub mod channel;
pub mod codec;
mod error;
pub mod optimizer;
pub mod protograph;
mod rate;
pub mod sim;
pub mod sparse;
pub mod tanner;

pub use error::{Error, Result};
pub use rate::Rate;
