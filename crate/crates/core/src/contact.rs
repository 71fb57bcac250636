//! Contact segmentation and pixel-area bookkeeping.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{ContactMask, DifferenceFrame};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error("threshold must be positive and finite, got {0}")]
    Threshold(f64),
    #[error("an area report needs at least two entries, got {0}")]
    TooFewEntries(usize),
}

/// Thresholds `max_c |D_c| >= tau`, then applies one 3x3 majority pass.
pub fn segment(diff: &DifferenceFrame, tau: f64) -> Result<ContactMask, ContactError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(ContactError::Threshold(tau));
    }
    let (w, h) = (diff.width(), diff.height());
    let raw: Vec<bool> = diff
        .data()
        .chunks_exact(diff.channels())
        .map(|px| px.iter().fold(0.0f64, |m, v| m.max(v.abs())) >= tau)
        .collect();
    Ok(ContactMask::new(w, h, majority_filter(&raw, w, h)).expect("shape preserved"))
}

/// A pixel is set when at least 5 of the 9 pixels of its 3x3 window are set;
/// pixels outside the raster count as unset.
pub fn majority_filter(mask: &[bool], width: usize, height: usize) -> Vec<bool> {
    let mut out = vec![false; mask.len()];
    for y in 0..height {
        for x in 0..width {
            let mut count = 0;
            for yy in y.saturating_sub(1)..=(y + 1).min(height - 1) {
                for xx in x.saturating_sub(1)..=(x + 1).min(width - 1) {
                    count += mask[yy * width + xx] as usize;
                }
            }
            out[y * width + x] = count >= 5;
        }
    }
    out
}

/// Inclusive pixel bounds of a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x_min: usize,
    pub y_min: usize,
    pub x_max: usize,
    pub y_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// 1-based, in raster order of each component's first pixel.
    pub label: usize,
    pub area_px: usize,
    pub bbox: BoundingBox,
}

/// 8-connected components, largest first (ties keep label order).
pub fn components(mask: &ContactMask) -> Vec<Component> {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0usize; w * h];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.mask()[start] || labels[start] != 0 {
            continue;
        }
        let label = out.len() + 1;
        let (sx, sy) = (start % w, start / w);
        let mut comp = Component { label, area_px: 0, bbox: BoundingBox { x_min: sx, y_min: sy, x_max: sx, y_max: sy } };
        labels[start] = label;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            comp.area_px += 1;
            let b = &mut comp.bbox;
            b.x_min = b.x_min.min(x);
            b.x_max = b.x_max.max(x);
            b.y_min = b.y_min.min(y);
            b.y_max = b.y_max.max(y);
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if mask.mask()[j] && labels[j] == 0 {
                        labels[j] = label;
                        queue.push_back(j);
                    }
                }
            }
        }
        out.push(comp);
    }
    out.sort_by(|a, b| b.area_px.cmp(&a.area_px).then(a.label.cmp(&b.label)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaEntry {
    pub name: String,
    pub area_px: f64,
}

/// Named areas with their descending order and groups of exactly equal areas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaReport {
    pub entries: Vec<AreaEntry>,
    pub ordering: Vec<String>,
    pub ties: Vec<Vec<String>>,
}

impl AreaReport {
    /// True when `names` appear in this order and no two of them are tied.
    pub fn strictly_ordered(&self, names: &[&str]) -> bool {
        let pos = |n: &str| self.ordering.iter().position(|o| o == n);
        let tied = |a: &str, b: &str| self.ties.iter().any(|t| t.iter().any(|x| x == a) && t.iter().any(|x| x == b));
        names.windows(2).all(|pair| match (pos(pair[0]), pos(pair[1])) {
            (Some(i), Some(j)) => i < j && !tied(pair[0], pair[1]),
            _ => false,
        })
    }
}

/// Orders named areas from largest to smallest; equal areas keep input
/// order and are listed together in `ties`.
pub fn area_report<S: Into<String> + Clone>(entries: &[(S, f64)]) -> Result<AreaReport, ContactError> {
    if entries.len() < 2 {
        return Err(ContactError::TooFewEntries(entries.len()));
    }
    let entries: Vec<AreaEntry> =
        entries.iter().map(|(n, a)| AreaEntry { name: n.clone().into(), area_px: *a }).collect();
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    idx.sort_by(|&a, &b| entries[b].area_px.total_cmp(&entries[a].area_px).then(a.cmp(&b)));
    let ordering = idx.iter().map(|&i| entries[i].name.clone()).collect();
    let mut ties: Vec<Vec<String>> = Vec::new();
    let mut k = 0;
    while k < idx.len() {
        let mut j = k + 1;
        while j < idx.len() && entries[idx[j]].area_px == entries[idx[k]].area_px {
            j += 1;
        }
        if j - k > 1 {
            ties.push(idx[k..j].iter().map(|&i| entries[i].name.clone()).collect());
        }
        k = j;
    }
    Ok(AreaReport { entries, ordering, ties })
}
