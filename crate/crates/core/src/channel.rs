//! Distributed transmit beamforming over i.i.d. Rayleigh fading.
//!
//! `M` nodes send the same BPSK symbol. Node `i` sees a flat-fading
//! coefficient `a_i ~ CN(0, 1)`, pre-rotates by `-arg(a_i)` (ideal
//! synchronization) and transmits with amplitude `1/sqrt(M)`, so the total
//! radiated power does not depend on `M`. The composite channel is real:
//! `r = m * g + n` with `g = sum |a_i| / sqrt(M)` and `n ~ N(0, sigma2)`.

use alloc::format;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Symbol for a bit under the fixed mapping 0 -> `+sqrt(es)`, 1 -> `-sqrt(es)`.
#[inline]
pub fn bpsk_symbol(bit: u8, es: f64) -> f64 {
    let a = libm::sqrt(es);
    if bit & 1 == 0 {
        a
    } else {
        -a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtbChannelParams {
    pub nodes: usize,
    pub ebn0_db: f64,
    /// Information bits per transmitted coded bit (1 when uncoded).
    pub rate: f64,
    pub bits_per_symbol: u32,
}

impl DtbChannelParams {
    pub fn new(nodes: usize, ebn0_db: f64, rate: f64) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidInput("at least one transmit node is required".into()));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidInput(format!("rate {rate} is not in (0, 1]")));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidInput(format!("Eb/N0 {ebn0_db} dB is not finite")));
        }
        Ok(DtbChannelParams {
            nodes,
            ebn0_db,
            rate,
            bits_per_symbol: 1,
        })
    }

    /// `(es, sigma2)` for this operating point.
    pub fn noise(&self) -> (f64, f64) {
        ebn0_to_sigma2(self.ebn0_db, self.rate, self.bits_per_symbol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    pub r: f64,
    pub gain: f64,
    pub sigma2: f64,
}

/// Per-node amplitude that keeps total transmit power constant.
pub fn node_amplitude(nodes: usize) -> f64 {
    1.0 / libm::sqrt(nodes as f64)
}

/// Effective real gain after every node cancels its own channel phase.
/// Each term `a_i e^{-j arg a_i}` equals `|a_i|`.
pub fn coherent_gain(coeffs: &[(f64, f64)]) -> f64 {
    let sum: f64 = coeffs.iter().map(|&(re, im)| libm::hypot(re, im)).sum();
    sum * node_amplitude(coeffs.len())
}

/// One unit-power circularly symmetric complex Gaussian sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    (re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws fresh coefficients for `nodes` transmitters and returns the
/// combined gain `g`. Panics if `nodes` is zero.
pub fn dtb_gain<R: Rng + ?Sized>(nodes: usize, rng: &mut R) -> f64 {
    assert!(nodes >= 1, "at least one transmit node is required");
    let mut sum = 0.0;
    for _ in 0..nodes {
        let (re, im) = complex_gaussian(rng);
        sum += libm::hypot(re, im);
    }
    sum * node_amplitude(nodes)
}

/// `r = m g + n` for one BPSK symbol.
pub fn transmit_bpsk<R: Rng + ?Sized>(
    bit: u8,
    gain: f64,
    es: f64,
    sigma2: f64,
    rng: &mut R,
) -> ChannelSample {
    let noise: f64 = StandardNormal.sample(rng);
    ChannelSample {
        r: bpsk_symbol(bit, es) * gain + noise * libm::sqrt(sigma2),
        gain,
        sigma2,
    }
}

/// Symbol energy (normalized to 1) and per-dimension noise variance for an
/// energy-per-information-bit ratio. Punctured positions are not sent, so
/// `rate` should be `K / N_tx`.
pub fn ebn0_to_sigma2(ebn0_db: f64, rate: f64, bits_per_symbol: u32) -> (f64, f64) {
    let ebn0 = libm::pow(10.0, ebn0_db / 10.0);
    (1.0, 1.0 / (2.0 * rate * bits_per_symbol as f64 * ebn0))
}
