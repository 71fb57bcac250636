//! Raster containers shared by the imaging modules.
//!
//! All rasters are row-major with the origin at the top-left pixel and `y`
//! growing downward. Pixel `(x, y)` channel `c` of a frame lives at
//! `data[(y * width + x) * channels + c]`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("raster is empty ({width}x{height})")]
    Empty { width: usize, height: usize },
    #[error("expected {expected} samples, got {actual}")]
    Length { expected: usize, actual: usize },
    #[error("unsupported channel count {0} (expected 2 or 3)")]
    Channels(usize),
    #[error("sample {index} = {value} is outside [{lo}, {hi}]")]
    OutOfRange { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("sample {0} is not finite")]
    NonFinite(usize),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize, usize), (usize, usize, usize)),
}

fn check_len(width: usize, height: usize, per_pixel: usize, len: usize) -> Result<(), GridError> {
    if width == 0 || height == 0 {
        return Err(GridError::Empty { width, height });
    }
    let expected = width * height * per_pixel;
    if len != expected {
        return Err(GridError::Length { expected, actual: len });
    }
    Ok(())
}

fn check_range(data: &[f64], lo: f64, hi: f64) -> Result<(), GridError> {
    for (index, &value) in data.iter().enumerate() {
        if !value.is_finite() {
            return Err(GridError::NonFinite(index));
        }
        if value < lo || value > hi {
            return Err(GridError::OutOfRange { index, value, lo, hi });
        }
    }
    Ok(())
}

fn check_finite(data: &[f64]) -> Result<(), GridError> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(GridError::NonFinite(i)),
        None => Ok(()),
    }
}

/// A camera view of the gel: 2 or 3 channels of intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TactileFrame {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl TactileFrame {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self, GridError> {
        if !(2..=3).contains(&channels) {
            return Err(GridError::Channels(channels));
        }
        check_len(width, height, channels, data.len())?;
        check_range(&data, 0.0, 1.0)?;
        Ok(Self { width, height, channels, data })
    }

    /// A frame with every sample equal to `value`.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self, GridError> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// The first `n` channels of this frame, e.g. red and green of an RGB
    /// capture when only two lights are installed.
    pub fn select_channels(&self, n: usize) -> Result<Self, GridError> {
        if !(2..=3).contains(&n) || n > self.channels {
            return Err(GridError::Channels(n));
        }
        if n == self.channels {
            return Ok(self.clone());
        }
        let data = self
            .data
            .chunks_exact(self.channels)
            .flat_map(|px| px[..n].iter().copied())
            .collect();
        Ok(Self { width: self.width, height: self.height, channels: n, data })
    }
}

/// Signed per-channel difference between a tactile frame and its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceFrame {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl DifferenceFrame {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self, GridError> {
        if !(2..=3).contains(&channels) {
            return Err(GridError::Channels(channels));
        }
        check_len(width, height, channels, data.len())?;
        check_range(&data, -1.0, 1.0)?;
        Ok(Self { width, height, channels, data })
    }

    /// `frame - reference`, channel by channel.
    pub fn between(frame: &TactileFrame, reference: &TactileFrame) -> Result<Self, GridError> {
        if frame.shape() != reference.shape() {
            return Err(GridError::ShapeMismatch(frame.shape(), reference.shape()));
        }
        let data = frame.data.iter().zip(&reference.data).map(|(a, b)| a - b).collect();
        Ok(Self { width: frame.width, height: frame.height, channels: frame.channels, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Channel samples of pixel `(x, y)`.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    /// Every sample multiplied by `alpha`, clamped back into `[-1, 1]`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let data = self.data.iter().map(|v| (v * alpha).clamp(-1.0, 1.0)).collect();
        Self { data, ..self.clone() }
    }

    pub fn select_channels(&self, n: usize) -> Result<Self, GridError> {
        if !(2..=3).contains(&n) || n > self.channels {
            return Err(GridError::Channels(n));
        }
        let data = self
            .data
            .chunks_exact(self.channels)
            .flat_map(|px| px[..n].iter().copied())
            .collect();
        Ok(Self { width: self.width, height: self.height, channels: n, data })
    }
}

/// Per-pixel surface slopes `p = dz/dx`, `q = dz/dy` in pixel units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientField {
    width: usize,
    height: usize,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl GradientField {
    pub fn new(width: usize, height: usize, p: Vec<f64>, q: Vec<f64>) -> Result<Self, GridError> {
        check_len(width, height, 1, p.len())?;
        check_len(width, height, 1, q.len())?;
        check_finite(&p)?;
        check_finite(&q)?;
        Ok(Self { width, height, p, q })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        let n = width * height;
        Self { width, height, p: vec![0.0; n], q: vec![0.0; n] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.p[i], self.q[i])
    }

    /// Forward-difference gradient of a depth map, the discretization the
    /// Poisson integrator inverts. The last column of `p` and the last row
    /// of `q` are zero.
    pub fn forward_differences(depth: &DepthMap) -> Self {
        let (w, h) = (depth.width, depth.height);
        let mut g = Self::zeros(w, h);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if x + 1 < w {
                    g.p[i] = depth.z[i + 1] - depth.z[i];
                }
                if y + 1 < h {
                    g.q[i] = depth.z[i + w] - depth.z[i];
                }
            }
        }
        g
    }

    /// Central-difference gradient, one-sided at the border.
    pub fn central_differences(depth: &DepthMap) -> Self {
        let (w, h) = (depth.width, depth.height);
        let z = |x: usize, y: usize| depth.z[y * w + x];
        let mut g = Self::zeros(w, h);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                let (x0, x1) = (x.saturating_sub(1), (x + 1).min(w - 1));
                let (y0, y1) = (y.saturating_sub(1), (y + 1).min(h - 1));
                if x1 > x0 {
                    g.p[i] = (z(x1, y) - z(x0, y)) / (x1 - x0) as f64;
                }
                if y1 > y0 {
                    g.q[i] = (z(x, y1) - z(x, y0)) / (y1 - y0) as f64;
                }
            }
        }
        g
    }

    /// Resamples pixel-centred slopes onto the half-pixel-shifted positions
    /// used by forward differences: `p'(x) = (p(x) + p(x+1)) / 2`.
    pub fn to_forward_staggered(&self) -> Self {
        let (w, h) = (self.width, self.height);
        let mut g = Self::zeros(w, h);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if x + 1 < w {
                    g.p[i] = 0.5 * (self.p[i] + self.p[i + 1]);
                }
                if y + 1 < h {
                    g.q[i] = 0.5 * (self.q[i] + self.q[i + w]);
                }
            }
        }
        g
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| alpha * u + beta * v).collect();
        Self { width: self.width, height: self.height, p: mix(&self.p, &other.p), q: mix(&self.q, &other.q) }
    }
}

/// Height field, one sample per pixel, in pixel-spacing units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthMap {
    width: usize,
    height: usize,
    z: Vec<f64>,
}

impl DepthMap {
    pub fn new(width: usize, height: usize, z: Vec<f64>) -> Result<Self, GridError> {
        check_len(width, height, 1, z.len())?;
        check_finite(&z)?;
        Ok(Self { width, height, z })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, z: vec![0.0; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn into_z(self) -> Vec<f64> {
        self.z
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.z[y * self.width + x]
    }

    pub fn max_abs(&self) -> f64 {
        self.z.iter().fold(0.0, |m, v| if v.abs() > m { v.abs() } else { m })
    }

    /// True when every pixel of the outermost ring is exactly zero.
    pub fn boundary_is_zero(&self) -> bool {
        let (w, h) = (self.width, self.height);
        (0..w).all(|x| self.at(x, 0) == 0.0 && self.at(x, h - 1) == 0.0)
            && (0..h).all(|y| self.at(0, y) == 0.0 && self.at(w - 1, y) == 0.0)
    }

    /// Depth linearly mapped to `[0, 1]` (`min -> 0`, `max -> 1`); a
    /// constant map becomes all zeros.
    pub fn normalized(&self) -> Vec<f64> {
        let lo = self.z.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        if span <= 0.0 {
            return vec![0.0; self.z.len()];
        }
        self.z.iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect()
    }
}

/// Boolean contact mask and its pixel count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactMask {
    width: usize,
    height: usize,
    mask: Vec<bool>,
    area_px: usize,
}

impl ContactMask {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self, GridError> {
        check_len(width, height, 1, mask.len())?;
        let area_px = mask.iter().filter(|&&m| m).count();
        Ok(Self { width, height, mask, area_px })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self { width, height, mask: vec![false; width * height], area_px: 0 }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn area_px(&self) -> usize {
        self.area_px
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pixel_probe_lands_at_documented_index() {
        let (w, h, c) = (5, 4, 3);
        let mut data = vec![0.0; w * h * c];
        data[(2 * w + 3) * c + 1] = 1.0;
        let frame = TactileFrame::new(w, h, c, data).unwrap();
        for y in 0..h {
            for x in 0..w {
                for ch in 0..c {
                    let expect = if (x, y, ch) == (3, 2, 1) { 1.0 } else { 0.0 };
                    assert_eq!(frame.get(x, y, ch), expect);
                }
            }
        }
    }

    #[test]
    fn frame_rejects_bad_input() {
        assert_eq!(TactileFrame::new(1, 1, 1, vec![0.0]), Err(GridError::Channels(1)));
        assert!(matches!(TactileFrame::new(2, 1, 3, vec![0.0; 5]), Err(GridError::Length { .. })));
        assert!(matches!(TactileFrame::new(1, 1, 2, vec![0.5, 1.5]), Err(GridError::OutOfRange { index: 1, .. })));
        assert!(matches!(TactileFrame::new(1, 1, 2, vec![f64::NAN, 0.0]), Err(GridError::NonFinite(0))));
        assert!(matches!(TactileFrame::new(0, 1, 2, vec![]), Err(GridError::Empty { .. })));
    }

    #[test]
    fn difference_of_example_pixel() {
        let f = TactileFrame::new(1, 1, 3, vec![0.8, 0.2, 0.5]).unwrap();
        let r = TactileFrame::new(1, 1, 3, vec![0.5, 0.5, 0.5]).unwrap();
        let d = DifferenceFrame::between(&f, &r).unwrap();
        let expect = [0.3, -0.3, 0.0];
        for (a, b) in d.data().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn mask_area_is_popcount() {
        let m = ContactMask::new(3, 2, vec![true, false, true, false, false, true]).unwrap();
        assert_eq!(m.area_px(), 3);
    }

    #[test]
    fn forward_differences_of_ramp() {
        let z = (0..12).map(|i| (i % 4) as f64 * 2.0 + (i / 4) as f64).collect();
        let d = DepthMap::new(4, 3, z).unwrap();
        let g = GradientField::forward_differences(&d);
        assert_eq!(g.at(0, 0), (2.0, 1.0));
        assert_eq!(g.at(3, 1), (0.0, 1.0));
        assert_eq!(g.at(1, 2), (2.0, 0.0));
    }
}
