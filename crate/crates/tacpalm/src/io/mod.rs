//! Raster file formats: 8/16-bit PNG for frames and masks, PFM for depth.

pub mod pfm;
pub mod png;

use std::path::PathBuf;

use tacpalm_core::GridError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error("{path}: PNG decode failed: {source}")]
    PngDecode { path: PathBuf, source: ::png::DecodingError },
    #[error("PNG encode failed: {0}")]
    PngEncode(#[from] ::png::EncodingError),
    #[error("{path}: unsupported PNG layout ({detail})")]
    PngLayout { path: PathBuf, detail: String },
    #[error("malformed PFM: {0}")]
    PfmHeader(String),
    #[error("PFM has {0} channels; depth maps need 1 (`Pf`)")]
    PfmChannels(usize),
    #[error("value {value} at sample {index} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl IoError {
    pub(crate) fn file(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| IoError::File { path, source }
    }
}
