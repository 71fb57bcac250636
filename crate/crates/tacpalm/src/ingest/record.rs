use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FrameSource, IngestError};
use crate::formats::write_json;
use crate::io::png::write_frame_png;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub index: u64,
    pub timestamp_s: f64,
}

/// `frames.len() == parts - dropped`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub parts: u64,
    pub dropped: u64,
    pub frames: Vec<ManifestEntry>,
}

/// Writes up to `limit` frames as PNGs plus `manifest.json` into `out_dir`.
pub fn record(source: &mut dyn FrameSource, out_dir: impl AsRef<Path>, limit: Option<usize>) -> Result<Manifest, IngestError> {
    let out = out_dir.as_ref();
    fs::create_dir_all(out).map_err(|source| IngestError::Directory { path: out.display().to_string(), source })?;
    let mut frames = Vec::new();
    while limit.is_none_or(|n| frames.len() < n) {
        let Some(frame) = source.next_frame()? else { break };
        let file = format!("frame_{:06}.png", frame.index);
        write_frame_png(&frame.image, out.join(&file))?;
        frames.push(ManifestEntry { file, index: frame.index, timestamp_s: frame.timestamp.as_secs_f64() });
    }
    let stats = source.stats();
    let manifest = Manifest { parts: frames.len() as u64 + stats.dropped, dropped: stats.dropped, frames };
    write_json(out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}
