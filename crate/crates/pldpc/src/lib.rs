//! File formats, Monte Carlo BER campaigns and the `pldpc` command line
//! on top of [`pldpc_core`].

pub mod campaign;
mod error;
pub mod formats;

pub use error::{Error, Result};
pub use pldpc_core as core;
