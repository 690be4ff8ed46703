//! Single-frame Monte Carlo kernels.
//!
//! Every frame draws from its own ChaCha8 stream keyed by `(seed, frame)`,
//! so a set of frames gives the same counts however it is split across
//! workers.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{dtb_gain, ebn0_to_sigma2, transmit_bpsk};
use crate::codec::{build_encoder, channel_llr, encode, BpDecoder, EncoderTables, LlrVector};
use crate::protograph::QcParityCheck;
use crate::sparse::SparseMatrix;
use crate::{Error, Result};

/// Bits per frame when no code is used.
pub const UNCODED_FRAME_BITS: usize = 1024;

/// Counts from one frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    /// Message bits sent.
    pub bits: u64,
    pub bit_errors: u64,
    /// Decoder iterations used (0 when uncoded).
    pub iterations: u64,
}

impl FrameOutcome {
    pub fn frame_error(&self) -> bool {
        self.bit_errors > 0
    }
}

/// Random stream for frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// What gets sent over the channel.
#[derive(Debug, Clone)]
pub enum Link {
    Uncoded { frame_bits: usize },
    Coded(Box<CodedLink>),
}

/// Encoder, decoder and energy accounting for one parity-check matrix.
#[derive(Debug, Clone)]
pub struct CodedLink {
    tables: EncoderTables,
    decoder: BpDecoder,
    max_iter: usize,
}

impl CodedLink {
    pub fn new(h: &SparseMatrix, punctured: &[usize], max_iter: usize) -> Result<Self> {
        let tables = build_encoder(h, punctured)?;
        if tables.k() == 0 {
            return Err(Error::InvalidInput("code has no information bits".into()));
        }
        if tables.n_tx() == 0 {
            return Err(Error::InvalidInput("code transmits no bits".into()));
        }
        Ok(CodedLink {
            tables,
            decoder: BpDecoder::new(h),
            max_iter,
        })
    }

    pub fn from_code(code: &QcParityCheck, max_iter: usize) -> Result<Self> {
        Self::new(code.matrix(), code.punctured_cols(), max_iter)
    }

    pub fn tables(&self) -> &EncoderTables {
        &self.tables
    }

    /// Information bits per transmitted bit, `K / N_tx`.
    pub fn rate(&self) -> f64 {
        self.tables.k() as f64 / self.tables.n_tx() as f64
    }
}

impl Link {
    pub fn uncoded() -> Self {
        Link::Uncoded {
            frame_bits: UNCODED_FRAME_BITS,
        }
    }

    pub fn coded(link: CodedLink) -> Self {
        Link::Coded(Box::new(link))
    }

    pub fn rate(&self) -> f64 {
        match self {
            Link::Uncoded { .. } => 1.0,
            Link::Coded(c) => c.rate(),
        }
    }

    pub fn message_bits(&self) -> usize {
        match self {
            Link::Uncoded { frame_bits } => *frame_bits,
            Link::Coded(c) => c.tables.k(),
        }
    }

    /// Sends one frame through `nodes`-node beamforming at `ebn0_db` and
    /// counts message-bit errors.
    pub fn run_frame(&self, nodes: usize, ebn0_db: f64, seed: u64, frame: u64) -> Result<FrameOutcome> {
        if nodes == 0 {
            return Err(Error::InvalidInput("at least one transmit node is required".into()));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidInput(format!("Eb/N0 {ebn0_db} dB is not finite")));
        }
        let mut rng = frame_rng(seed, frame);
        let (es, sigma2) = ebn0_to_sigma2(ebn0_db, self.rate(), 1);
        match self {
            Link::Uncoded { frame_bits } => {
                let mut errors = 0;
                for _ in 0..*frame_bits {
                    let bit = rng.random::<bool>() as u8;
                    let g = dtb_gain(nodes, &mut rng);
                    let s = transmit_bpsk(bit, g, es, sigma2, &mut rng);
                    errors += ((s.r < 0.0) as u8 != bit) as u64;
                }
                Ok(FrameOutcome {
                    bits: *frame_bits as u64,
                    bit_errors: errors,
                    iterations: 0,
                })
            }
            Link::Coded(link) => {
                let t = &link.tables;
                let message: Vec<u8> = (0..t.k()).map(|_| rng.random::<bool>() as u8).collect();
                let cw = encode(t, &message)?;
                let mut llr = vec![0.0; t.n()];
                for &pos in t.tx_positions() {
                    let g = dtb_gain(nodes, &mut rng);
                    let s = transmit_bpsk(cw.full[pos], g, es, sigma2, &mut rng);
                    llr[pos] = channel_llr(s.r, s.gain, s.sigma2)?;
                }
                let llr = LlrVector::new(llr, t.punctured())?;
                let out = link.decoder.decode(&llr, link.max_iter);
                let decoded = t.extract_message(&out.hard);
                let errors = decoded.iter().zip(&message).filter(|(a, b)| a != b).count();
                Ok(FrameOutcome {
                    bits: t.k() as u64,
                    bit_errors: errors as u64,
                    iterations: out.iterations as u64,
                })
            }
        }
    }
}
