//! Frame acquisition from MJPEG-over-HTTP streams and image directories.

mod directory;
mod http;
pub mod multipart;
mod queue;
mod record;

use std::time::Duration;

use tacpalm_core::TactileFrame;
use thiserror::Error;

pub use directory::DirectorySource;
pub use http::{parse_content_type, HttpConfig, HttpSource, RetryPolicy};
pub use queue::{bounded, spawn_reader, QueueReceiver, QueueSender, DEFAULT_QUEUE_DEPTH};
pub use record::{record, Manifest, ManifestEntry};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("bad URL {0:?}")]
    Url(String),
    #[error("connect to {addr} failed: {source}")]
    Connect { addr: String, source: std::io::Error },
    #[error("server answered HTTP {0}")]
    Status(u16),
    #[error("expected multipart/x-mixed-replace, got {0:?}")]
    WrongContentType(String),
    #[error("Content-Type has no boundary parameter")]
    MissingBoundary,
    #[error("invalid boundary token {0:?}")]
    BadBoundary(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("connection closed mid-stream")]
    Disconnected,
    #[error("stream lost; {tries} reconnect attempts failed, last: {last}")]
    ReconnectFailed { tries: u32, last: String },
    #[error("{path}: {source}")]
    Directory { path: String, source: std::io::Error },
    #[error("invalid frame-rate {0}")]
    FrameRate(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Write(#[from] crate::io::IoError),
    #[error(transparent)]
    Manifest(#[from] crate::formats::FormatError),
}

/// A delivered frame with its source bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Since the source was opened; strictly increasing per source.
    pub timestamp: Duration,
    /// Position among delivered frames, from 0.
    pub index: u64,
    /// The file or part payload exactly as received.
    pub encoded: Vec<u8>,
    pub image: TactileFrame,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SourceStats {
    pub delivered: u64,
    /// Parts or files skipped as truncated or undecodable.
    pub dropped: u64,
    pub reconnects: u32,
}

pub trait FrameSource {
    /// The next decodable frame, or `None` at end of stream.
    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError>;
    fn stats(&self) -> SourceStats;
    /// Stops the source; later calls to `next_frame` return `None`.
    fn close(&mut self);
}

/// True when the payload starts with SOI and ends with EOI (trailing line
/// breaks ignored).
pub fn is_complete_jpeg(bytes: &[u8]) -> bool {
    let end = bytes.iter().rposition(|&b| b != b'\r' && b != b'\n').map_or(0, |i| i + 1);
    let body = &bytes[..end];
    body.len() >= 4 && body.starts_with(&[0xFF, 0xD8]) && body.ends_with(&[0xFF, 0xD9])
}

/// Baseline JPEG to a 3-channel frame in `[0, 1]`.
pub fn decode_jpeg(bytes: &[u8]) -> Result<TactileFrame, String> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Jpeg).map_err(|e| e.to_string())?;
    let rgb = img.to_rgb8();
    let data = rgb.as_raw().iter().map(|&b| f64::from(b) / 255.0).collect();
    TactileFrame::new(rgb.width() as usize, rgb.height() as usize, 3, data).map_err(|e| e.to_string())
}

/// Issues strictly increasing timestamps from a possibly coarse clock.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Monotone {
    last: Option<Duration>,
}

impl Monotone {
    pub(crate) fn stamp(&mut self, t: Duration) -> Duration {
        let t = match self.last {
            Some(last) if t <= last => last + Duration::from_nanos(1),
            _ => t,
        };
        self.last = Some(t);
        t
    }
}
