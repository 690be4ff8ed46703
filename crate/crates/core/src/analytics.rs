//! Closed-form BER expressions for BPSK.
//!
//! [`uncoded_dtb_ber`] is asymptotic in the number of transmitters: it is
//! exact only as `M` grows and should be compared against simulation for
//! `M >= 8`.

use core::f64::consts::{PI, SQRT_2};

/// One analytic operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub nodes: usize,
    pub ebn0_db: f64,
    pub ber: f64,
}

#[inline]
fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Gaussian upper tail `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `Q(sqrt(pi M x / (2 + (4 - pi) x)))` with `x` the linear Eb/N0.
pub fn uncoded_dtb_ber(nodes: usize, ebn0_db: f64) -> f64 {
    let x = db_to_linear(ebn0_db);
    q_function(libm::sqrt(PI * nodes as f64 * x / (2.0 + (4.0 - PI) * x)))
}

/// Operating point form of [`uncoded_dtb_ber`].
pub fn uncoded_dtb_point(nodes: usize, ebn0_db: f64) -> BerPoint {
    BerPoint {
        nodes,
        ebn0_db,
        ber: uncoded_dtb_ber(nodes, ebn0_db),
    }
}

/// Smallest `M >= 1` whose asymptotic uncoded BER is at most `target_ber`.
///
/// The Q-function argument grows like `sqrt(M)`, so the doubling phase
/// always terminates for `0 < target_ber < 0.5`.
pub fn min_nodes(ebn0_db: f64, target_ber: f64) -> usize {
    assert!(
        target_ber > 0.0 && target_ber < 0.5,
        "target BER must lie in (0, 0.5)"
    );
    let meets = |m: usize| uncoded_dtb_ber(m, ebn0_db) <= target_ber;
    if meets(1) {
        return 1;
    }
    let mut hi = 2;
    while !meets(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // Invariant: !meets(lo) && meets(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Average BPSK BER over a single Rayleigh link with perfect CSI:
/// `(1 - sqrt(g / (1 + g))) / 2` for linear mean SNR `g`.
pub fn siso_rayleigh_ber(ebn0_db: f64) -> f64 {
    let g = db_to_linear(ebn0_db);
    // 1 - s = (1 - s^2) / (1 + s) avoids cancellation at high SNR.
    let s = libm::sqrt(g / (1.0 + g));
    0.5 / ((1.0 + g) * (1.0 + s))
}
