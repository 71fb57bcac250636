//! JSON documents: scenes, calibrations, materials, palm configuration and
//! reports. Everything on disk is SI except where a key says otherwise
//! (`*_mm`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tacpalm_core::beam::{BeamError, Material};
use tacpalm_core::press2d::profile::Shape;
use tacpalm_core::press2d::PalmConfig;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {detail}")]
    Invalid { path: PathBuf, detail: String },
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json { path: path.into(), source })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: impl AsRef<Path>, value: &T) -> Result<(), FormatError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.into(), source })
}

/// A materials-file entry. Values may be `null` when the user still has to
/// supply them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialEntry {
    pub name: String,
    #[serde(rename = "E_pa")]
    pub youngs_modulus: Option<f64>,
    #[serde(rename = "tensile_strength_pa")]
    pub tensile_strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MaterialEntry {
    pub fn to_material(&self) -> Result<Material, BeamError> {
        match (self.youngs_modulus, self.tensile_strength) {
            (Some(e), Some(s)) => Material::new(self.name.clone(), e, s),
            _ => Err(BeamError::MissingValues(self.name.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialsFile {
    One(MaterialEntry),
    Many(Vec<MaterialEntry>),
}

impl MaterialsFile {
    pub fn entries(&self) -> &[MaterialEntry] {
        match self {
            MaterialsFile::One(m) => std::slice::from_ref(m),
            MaterialsFile::Many(v) => v,
        }
    }

    /// The entry called `name`, or the only entry when `name` is `None`.
    pub fn pick(&self, name: Option<&str>) -> Result<&MaterialEntry, String> {
        let entries = self.entries();
        match name {
            Some(n) => entries.iter().find(|m| m.name == n).ok_or_else(|| format!("no material named {n:?}")),
            None if entries.len() == 1 => Ok(&entries[0]),
            None => Err(format!("{} materials in file; choose one by name", entries.len())),
        }
    }
}

/// Palm parameters plus the press depth used for each shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PalmFile {
    pub palm: PalmConfig,
    #[serde(default)]
    pub depths_mm: BTreeMap<String, f64>,
}

impl PalmFile {
    pub fn shipped() -> Self {
        let depths_mm = ["cylinder", "cube", "plus", "star"]
            .into_iter()
            .map(|n| (n.to_string(), Shape::by_name(n).expect("known shape").default_depth() * 1e3))
            .collect();
        Self { palm: PalmConfig::shipped(), depths_mm }
    }

    /// Depth for `shape` in metres: this file's entry, else the built-in default.
    pub fn depth_for(&self, shape: &Shape) -> f64 {
        self.depths_mm.get(shape.name()).map_or_else(|| shape.default_depth(), |mm| mm * 1e-3)
    }
}
