//! File formats, frame ingestion and the command line for the tactile palm
//! toolkit. The numerics live in [`tacpalm_core`], re-exported as `core`.

pub mod cli;
pub mod formats;
pub mod ingest;
pub mod io;

pub use tacpalm_core as core;
