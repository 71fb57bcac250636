use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use log::warn;

use super::{decode_jpeg, Frame, FrameSource, IngestError, SourceStats};
use crate::io::png::read_png;

/// Image files in a directory, in lexicographic file-name order, stamped
/// at `index / fps` seconds.
pub struct DirectorySource {
    files: Vec<PathBuf>,
    next: usize,
    fps: f64,
    stats: SourceStats,
}

impl DirectorySource {
    /// `pattern` is a shell glob over file names, e.g. `*.png`.
    pub fn open(dir: impl AsRef<Path>, pattern: &str, fps: f64) -> Result<Self, IngestError> {
        if !(fps.is_finite() && fps > 0.0) {
            return Err(IngestError::FrameRate(fps));
        }
        let dir = dir.as_ref();
        let pat = glob::Pattern::new(pattern).map_err(|e| IngestError::Protocol(format!("bad pattern {pattern:?}: {e}")))?;
        let dir_err = |source| IngestError::Directory { path: dir.display().to_string(), source };
        let mut files = Vec::new();
        for entry in fs::read_dir(dir).map_err(dir_err)? {
            let entry = entry.map_err(dir_err)?;
            let name = entry.file_name();
            if entry.file_type().map_err(dir_err)?.is_file() && name.to_str().is_some_and(|n| pat.matches(n)) {
                files.push(entry.path());
            }
        }
        files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
        Ok(Self { files, next: 0, fps, stats: SourceStats::default() })
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }
}

fn decode(path: &Path, bytes: &[u8]) -> Result<tacpalm_core::TactileFrame, String> {
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("jpg" | "jpeg") => decode_jpeg(bytes),
        _ => read_png(path).map_err(|e| e.to_string()),
    }
}

impl FrameSource for DirectorySource {
    fn next_frame(&mut self) -> Result<Option<Frame>, IngestError> {
        while let Some(path) = self.files.get(self.next).cloned() {
            self.next += 1;
            let encoded = fs::read(&path).map_err(|source| IngestError::Directory { path: path.display().to_string(), source })?;
            match decode(&path, &encoded) {
                Ok(image) => {
                    let index = self.stats.delivered;
                    self.stats.delivered += 1;
                    let timestamp = Duration::from_secs_f64(index as f64 / self.fps);
                    return Ok(Some(Frame { timestamp, index, encoded, image }));
                }
                Err(e) => {
                    self.stats.dropped += 1;
                    warn!("skipping {}: {e}", path.display());
                }
            }
        }
        Ok(None)
    }

    fn stats(&self) -> SourceStats {
        self.stats
    }

    fn close(&mut self) {
        self.next = self.files.len();
    }
}
