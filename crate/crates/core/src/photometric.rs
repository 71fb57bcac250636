//! Colored-light photometric model: difference images to surface slopes.
//!
//! Each channel `c` responds linearly to the local slope,
//! `D_c = a_c * p + b_c * q`. With three lights the per-pixel system is
//! overdetermined and solved in the least-squares sense; with two lights
//! it is solved exactly.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defaults;
use crate::grid::{DifferenceFrame, GradientField, GridError};
use crate::math;

/// Relative determinant below which a 2x2 normal matrix counts as singular.
const RANK_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhotometricError {
    #[error("unsupported channel count {0}")]
    Channels(usize),
    #[error("channel count mismatch: data has {data}, calibration has {calibration}")]
    ChannelMismatch { data: usize, calibration: usize },
    #[error("need at least {required} pixels with non-zero gradient, found {found}")]
    TooFewPixels { found: usize, required: usize },
    #[error("degenerate geometry: known gradients do not span both slope directions")]
    Degenerate,
    #[error("coefficient matrix is rank deficient")]
    RankDeficient,
    #[error("pair {index}: difference is {diff:?} but gradient is {grad:?}")]
    PairShape { index: usize, diff: (usize, usize), grad: (usize, usize) },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Per-channel linear response `(a_c, b_c)` to the slopes `(p, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotometricCalibration {
    pub channels: usize,
    pub coeffs: Vec<[f64; 2]>,
    pub residual_rms: f64,
}

impl PhotometricCalibration {
    pub fn new(coeffs: Vec<[f64; 2]>, residual_rms: f64) -> Result<Self, PhotometricError> {
        let channels = coeffs.len();
        if !(2..=3).contains(&channels) {
            return Err(PhotometricError::Channels(channels));
        }
        let cal = Self { channels, coeffs, residual_rms };
        cal.validate()?;
        Ok(cal)
    }

    /// Checks channel count and full column rank; deserialized values
    /// should pass through here before use.
    pub fn validate(&self) -> Result<(), PhotometricError> {
        if !(2..=3).contains(&self.channels) || self.coeffs.len() != self.channels {
            return Err(PhotometricError::Channels(self.coeffs.len()));
        }
        if self.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(PhotometricError::RankDeficient);
        }
        let n = self.normal_matrix();
        if !is_full_rank(&n) {
            return Err(PhotometricError::RankDeficient);
        }
        Ok(())
    }

    /// `A^T A` of the `channels x 2` coefficient matrix `A`.
    fn normal_matrix(&self) -> [f64; 3] {
        let mut n = [0.0; 3];
        for [a, b] in &self.coeffs {
            n[0] += a * a;
            n[1] += a * b;
            n[2] += b * b;
        }
        n
    }

    /// 2-norm condition number of the coefficient matrix.
    pub fn condition_number(&self) -> f64 {
        let (lo, hi) = sym_eigen(&self.normal_matrix());
        if lo <= 0.0 {
            return f64::INFINITY;
        }
        math::sqrt(hi / lo)
    }

    /// Keeps the first `n` channels.
    pub fn select_channels(&self, n: usize) -> Result<Self, PhotometricError> {
        if n > self.channels {
            return Err(PhotometricError::ChannelMismatch { data: n, calibration: self.channels });
        }
        Self::new(self.coeffs[..n].to_vec(), self.residual_rms)
    }

    /// Predicted difference for slopes `(p, q)`.
    pub fn predict(&self, p: f64, q: f64) -> Vec<f64> {
        self.coeffs.iter().map(|[a, b]| a * p + b * q).collect()
    }
}

/// Eigenvalues (ascending) of the symmetric matrix `[[n0, n1], [n1, n2]]`.
fn sym_eigen(n: &[f64; 3]) -> (f64, f64) {
    let mean = 0.5 * (n[0] + n[2]);
    let d = 0.5 * (n[0] - n[2]);
    let r = math::sqrt(d * d + n[1] * n[1]);
    (mean - r, mean + r)
}

fn is_full_rank(n: &[f64; 3]) -> bool {
    let det = n[0] * n[2] - n[1] * n[1];
    n[0] > 0.0 && n[2] > 0.0 && det > RANK_EPS * n[0] * n[2]
}

/// Global least-squares fit of `D_c ~ a_c p + b_c q` over every pixel whose
/// known gradient is non-zero.
pub fn fit_calibration(
    pairs: &[(DifferenceFrame, GradientField)],
    channels: usize,
) -> Result<PhotometricCalibration, PhotometricError> {
    if !(2..=3).contains(&channels) {
        return Err(PhotometricError::Channels(channels));
    }
    let mut normal = [0.0; 3];
    let mut rhs = vec![[0.0; 2]; channels];
    let mut used = 0usize;
    for (index, (diff, grad)) in pairs.iter().enumerate() {
        if (diff.width(), diff.height()) != (grad.width(), grad.height()) {
            return Err(PhotometricError::PairShape {
                index,
                diff: (diff.width(), diff.height()),
                grad: (grad.width(), grad.height()),
            });
        }
        if diff.channels() < channels {
            return Err(PhotometricError::ChannelMismatch { data: diff.channels(), calibration: channels });
        }
        for (i, (&p, &q)) in grad.p().iter().zip(grad.q()).enumerate() {
            if p.abs() + q.abs() == 0.0 {
                continue;
            }
            used += 1;
            normal[0] += p * p;
            normal[1] += p * q;
            normal[2] += q * q;
            let px = &diff.data()[i * diff.channels()..];
            for (c, r) in rhs.iter_mut().enumerate() {
                r[0] += p * px[c];
                r[1] += q * px[c];
            }
        }
    }
    if used < defaults::MIN_CALIBRATION_PIXELS {
        return Err(PhotometricError::TooFewPixels { found: used, required: defaults::MIN_CALIBRATION_PIXELS });
    }
    if !is_full_rank(&normal) {
        return Err(PhotometricError::Degenerate);
    }
    let det = normal[0] * normal[2] - normal[1] * normal[1];
    let coeffs: Vec<[f64; 2]> = rhs
        .iter()
        .map(|[rp, rq]| [(normal[2] * rp - normal[1] * rq) / det, (normal[0] * rq - normal[1] * rp) / det])
        .collect();

    let mut sq = 0.0;
    for (diff, grad) in pairs {
        for (i, (&p, &q)) in grad.p().iter().zip(grad.q()).enumerate() {
            if p.abs() + q.abs() == 0.0 {
                continue;
            }
            let px = &diff.data()[i * diff.channels()..];
            for (c, [a, b]) in coeffs.iter().enumerate() {
                let r = px[c] - (a * p + b * q);
                sq += r * r;
            }
        }
    }
    let residual_rms = math::sqrt(sq / (used * channels) as f64);
    PhotometricCalibration::new(coeffs, residual_rms).map_err(|_| PhotometricError::Degenerate)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Pixels with `max_c |D_c|` strictly below this get zero slope.
    pub noise_floor: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { noise_floor: defaults::NOISE_FLOOR }
    }
}

/// Output of [`estimate_gradients`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub field: GradientField,
    /// Per-pixel `||D - A g||`; zero for two channels and floored pixels.
    pub residual: Vec<f64>,
    /// Pixels whose local system was singular and were mapped to `(0, 0)`.
    pub singular_pixels: usize,
    /// Pixels below the noise floor.
    pub floored_pixels: usize,
}

/// Per-pixel slope estimate from a difference frame.
///
/// Never fails on pixel data: a singular system yields zero slope and is
/// counted in [`GradientEstimate::singular_pixels`].
pub fn estimate_gradients(
    diff: &DifferenceFrame,
    calib: &PhotometricCalibration,
    opts: EstimateOptions,
) -> Result<GradientEstimate, PhotometricError> {
    let ch = calib.channels;
    if diff.channels() != ch {
        return Err(PhotometricError::ChannelMismatch { data: diff.channels(), calibration: ch });
    }
    let (w, h) = (diff.width(), diff.height());
    let solver = PixelSolver::new(calib);
    let mut p = vec![0.0; w * h];
    let mut q = vec![0.0; w * h];
    let mut residual = vec![0.0; w * h];
    let mut singular_pixels = 0;
    let mut floored_pixels = 0;

    for (i, px) in diff.data().chunks_exact(ch).enumerate() {
        let peak = px.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak < opts.noise_floor {
            floored_pixels += 1;
            continue;
        }
        match solver.solve(px) {
            Some((gp, gq)) => {
                p[i] = gp;
                q[i] = gq;
                if ch == 3 {
                    let sq: f64 = calib
                        .coeffs
                        .iter()
                        .zip(px)
                        .map(|([a, b], d)| {
                            let r = d - (a * gp + b * gq);
                            r * r
                        })
                        .sum();
                    residual[i] = math::sqrt(sq);
                }
            }
            None => singular_pixels += 1,
        }
    }
    Ok(GradientEstimate { field: GradientField::new(w, h, p, q)?, residual, singular_pixels, floored_pixels })
}

/// Precomputed per-pixel inversion: the pseudo-inverse for three channels,
/// the plain inverse for two.
struct PixelSolver {
    rows: Option<[Vec<f64>; 2]>,
}

impl PixelSolver {
    fn new(calib: &PhotometricCalibration) -> Self {
        let c = &calib.coeffs;
        if calib.channels == 2 {
            let [a0, b0] = c[0];
            let [a1, b1] = c[1];
            let det = a0 * b1 - a1 * b0;
            let scale = (a0 * a0 + b0 * b0) * (a1 * a1 + b1 * b1);
            if det * det <= RANK_EPS * scale {
                return Self { rows: None };
            }
            return Self { rows: Some([vec![b1 / det, -b0 / det], vec![-a1 / det, a0 / det]]) };
        }
        let n = calib.normal_matrix();
        if !is_full_rank(&n) {
            return Self { rows: None };
        }
        let det = n[0] * n[2] - n[1] * n[1];
        let (i00, i01, i11) = (n[2] / det, -n[1] / det, n[0] / det);
        let rp = c.iter().map(|[a, b]| i00 * a + i01 * b).collect();
        let rq = c.iter().map(|[a, b]| i01 * a + i11 * b).collect();
        Self { rows: Some([rp, rq]) }
    }

    fn solve(&self, d: &[f64]) -> Option<(f64, f64)> {
        let [rp, rq] = self.rows.as_ref()?;
        let dot = |r: &[f64]| r.iter().zip(d).map(|(a, b)| a * b).sum::<f64>();
        Some((dot(rp), dot(rq)))
    }
}
