//! Detection and removal of aliased seabed ("false bottom") echoes in
//! single-frequency split-beam echo sounder data.
//!
//! The crate is organised around a sample × ping grid model:
//!
//! - [`grid`]: echograms, split-beam angle channels, masks and mask algebra.
//! - [`bundle`]: the portable on-disk grid bundle (plain text, comma separated).
//! - [`detect`]: windowed angle statistics, dynamic Sv thresholding, region
//!   growing, hole filling and the full detection pipeline.
//! - [`geometry`]: alias-range arithmetic and cross-frequency plausibility.
//! - [`ek60`]: reader and writer for the subset of the Simrad EK60 RAW format
//!   needed to build bundles (CON0 and RAW0 datagrams).
//! - [`render`]: PNG rendering of echograms with optional mask overlay.
//! - [`synthetic`]: a seeded generator of echograms with known alias labels.

pub mod bundle;
pub mod detect;
pub mod ek60;
mod error;
pub mod geometry;
pub mod grid;
pub mod kv;
pub mod render;
pub mod synthetic;

pub use error::{Error, Result};
pub use grid::{AngleChannels, AngleGrid, Echogram, Mask, SeabedLine, NO_DATA};
