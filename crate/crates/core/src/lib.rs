//! Entropy quantifiers of binary document images computed directly on
//! row-wise run-length compressed data.
//!
//! - [`image`]: dense images and PBM I/O.
//! - [`rle`]: the run-length representation and its `.rld` text format.
//! - [`transition`]: transition counts/positions from runs, and column-wise
//!   streaming ("virtual decompression").
//! - [`entropy`]: CEQ and SEQ features, plus a pixel-scan [`entropy::oracle`].
//! - [`analysis`]: feature tables and F3 distance matrices.
//! - [`bench`]: synthetic fixtures and the timing harness.

pub mod analysis;
pub mod bench;
pub mod entropy;
pub mod error;
pub mod fixtures;
pub mod image;
pub mod rle;
mod sum;
pub mod transition;

pub use error::{Error, Result};
pub use sum::exact_sum;
