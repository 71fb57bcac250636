//! Numerical core of the tactile palm toolkit.
//!
//! Everything here works on in-memory rasters and profiles and needs only
//! `alloc`: photometric gradient estimation from colored-light difference
//! images, Dirichlet Poisson integration through a sine transform, a
//! synthetic tactile renderer used as a test oracle, contact segmentation,
//! cantilever sizing and a quasi-static 2-D palm press simulator.
//!
//! File formats, stream ingestion and the command line live in the `tacpalm`
//! companion crate.

#![no_std]
#![deny(rust_2018_idioms)]

extern crate alloc;

pub mod beam;
pub mod contact;
pub mod defaults;
pub mod fft;
pub mod grid;
mod math;
pub mod photometric;
pub mod poisson;
pub mod press2d;
pub mod renderer;

pub use grid::{ContactMask, DepthMap, DifferenceFrame, GradientField, GridError, TactileFrame};
