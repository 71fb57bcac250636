//! Synthetic tactile images from known depth maps.
//!
//! Shading is Lambertian under two or three directional colored lights,
//! one light per channel. Surface normals come from central differences of
//! the depth map, so a rendered scene exercises exactly the slopes the
//! photometric stage is meant to recover.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defaults;
use crate::grid::{DepthMap, GradientField, TactileFrame};
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("light {0} is invalid: direction must be unit length with positive z")]
    BadLight(usize),
    #[error("rig needs 2 or 3 lights, got {0}")]
    LightCount(usize),
    #[error("albedo {0} outside (0, 1]")]
    Albedo(f64),
    #[error("ambient {0} outside [0, 1)")]
    Ambient(f64),
    #[error("indenter does not fit inside the {margin}-pixel margin of a {width}x{height} grid")]
    OutOfMargin { width: usize, height: usize, margin: usize },
    #[error("indenter depth {depth} exceeds gel thickness {gel}")]
    TooDeep { depth: f64, gel: f64 },
    #[error("invalid indenter parameter: {0}")]
    BadIndenter(&'static str),
    #[error("noise sigma {0} must be finite and non-negative")]
    BadNoise(f64),
    #[error("noise sigma > 0 requires a seed")]
    MissingSeed,
    #[error("grid {0}x{1} too small")]
    GridTooSmall(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Light {
    /// Unit vector towards the light; `x` right, `y` down, `z` out of the gel.
    pub direction: [f64; 3],
    pub ambient: f64,
}

impl Light {
    pub fn from_angles(azimuth: f64, elevation: f64, ambient: f64) -> Self {
        let ce = math::cos(elevation);
        Self {
            direction: [ce * math::cos(azimuth), ce * math::sin(azimuth), math::sin(elevation)],
            ambient,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightRig {
    pub lights: Vec<Light>,
    pub albedo: f64,
}

impl LightRig {
    /// Red, green and blue lights 120° apart.
    pub fn three_color() -> Self {
        Self::ring(&defaults::LIGHT_AZIMUTHS)
    }

    /// The three-color ring without its third light.
    pub fn two_color() -> Self {
        Self::ring(&defaults::LIGHT_AZIMUTHS[..2])
    }

    fn ring(azimuths: &[f64]) -> Self {
        Self {
            lights: azimuths
                .iter()
                .map(|&az| Light::from_angles(az, defaults::LIGHT_ELEVATION, defaults::AMBIENT))
                .collect(),
            albedo: defaults::ALBEDO,
        }
    }

    /// Same rig with every azimuth advanced by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = (math::sin(angle), math::cos(angle));
        let lights = self
            .lights
            .iter()
            .map(|l| {
                let [x, y, z] = l.direction;
                Light { direction: [c * x - s * y, s * x + c * y, z], ambient: l.ambient }
            })
            .collect();
        Self { lights, albedo: self.albedo }
    }

    pub fn channels(&self) -> usize {
        self.lights.len()
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if !(2..=3).contains(&self.lights.len()) {
            return Err(RenderError::LightCount(self.lights.len()));
        }
        if !(self.albedo > 0.0 && self.albedo <= 1.0) {
            return Err(RenderError::Albedo(self.albedo));
        }
        for (i, l) in self.lights.iter().enumerate() {
            let [x, y, z] = l.direction;
            let norm = math::sqrt(x * x + y * y + z * z);
            if !((norm - 1.0).abs() < 1e-9 && z > 0.0) {
                return Err(RenderError::BadLight(i));
            }
            if !(l.ambient >= 0.0 && l.ambient < 1.0) {
                return Err(RenderError::Ambient(l.ambient));
            }
        }
        Ok(())
    }
}

impl Default for LightRig {
    fn default() -> Self {
        Self::three_color()
    }
}

/// Shape pressed into the gel. Positions and lengths are in pixels; depths
/// are in the same units so slopes are dimensionless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Indenter {
    Flat,
    /// Spherical cap of a ball of `radius` pressed `depth` into the gel.
    Sphere { radius: f64, center: [f64; 2], depth: f64 },
    Gaussian { sigma: f64, amplitude: f64, center: [f64; 2] },
    /// Parallel ridges of period `pitch` along `x`, under a Hann envelope
    /// spanning the grid inside the margin.
    ScrewThread { pitch: f64, depth: f64 },
}

impl Indenter {
    fn peak_depth(&self) -> f64 {
        match *self {
            Indenter::Flat => 0.0,
            Indenter::Sphere { depth, .. } => depth,
            Indenter::Gaussian { amplitude, .. } => amplitude,
            Indenter::ScrewThread { depth, .. } => depth,
        }
    }
}

fn default_gel_thickness() -> f64 {
    defaults::GEL_THICKNESS_PX
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub indenter: Indenter,
    #[serde(default)]
    pub rig: LightRig,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_gel_thickness")]
    pub gel_thickness: f64,
}

impl SceneSpec {
    pub fn new(width: usize, height: usize, indenter: Indenter) -> Self {
        Self {
            width,
            height,
            indenter,
            rig: LightRig::default(),
            noise_sigma: 0.0,
            seed: None,
            gel_thickness: defaults::GEL_THICKNESS_PX,
        }
    }

    pub fn with_rig(mut self, rig: LightRig) -> Self {
        self.rig = rig;
        self
    }

    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Self {
        self.noise_sigma = sigma;
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        let (w, h) = (self.width, self.height);
        let m = defaults::SCENE_MARGIN_PX;
        if w < 2 * m + 3 || h < 2 * m + 3 {
            return Err(RenderError::GridTooSmall(w, h));
        }
        self.rig.validate()?;
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(RenderError::BadNoise(self.noise_sigma));
        }
        if self.noise_sigma > 0.0 && self.seed.is_none() {
            return Err(RenderError::MissingSeed);
        }
        let depth = self.indenter.peak_depth();
        if depth > self.gel_thickness {
            return Err(RenderError::TooDeep { depth, gel: self.gel_thickness });
        }
        let fits = |cx: f64, cy: f64, reach: f64| {
            let lo = m as f64;
            cx - reach >= lo && cy - reach >= lo && cx + reach <= (w - 1 - m) as f64 && cy + reach <= (h - 1 - m) as f64
        };
        let out = RenderError::OutOfMargin { width: w, height: h, margin: m };
        match self.indenter {
            Indenter::Flat => {}
            Indenter::Sphere { radius, center, depth } => {
                if !(radius > 0.0 && depth >= 0.0 && depth <= radius) {
                    return Err(RenderError::BadIndenter("sphere needs radius > 0 and 0 <= depth <= radius"));
                }
                let reach = math::sqrt(radius * radius - (radius - depth) * (radius - depth));
                if !fits(center[0], center[1], reach) {
                    return Err(out);
                }
            }
            Indenter::Gaussian { sigma, amplitude, center } => {
                if !(sigma > 0.0 && amplitude.is_finite() && amplitude >= 0.0) {
                    return Err(RenderError::BadIndenter("gaussian needs sigma > 0 and amplitude >= 0"));
                }
                if !fits(center[0], center[1], 3.0 * sigma) {
                    return Err(out);
                }
            }
            Indenter::ScrewThread { pitch, depth } => {
                if !(pitch >= 2.0 && depth >= 0.0) {
                    return Err(RenderError::BadIndenter("screw thread needs pitch >= 2 px and depth >= 0"));
                }
            }
        }
        Ok(())
    }
}

/// Hann window on `[m, n-1-m]`, zero outside, and its derivative.
fn hann(x: f64, n: usize, m: usize) -> (f64, f64) {
    let lo = m as f64;
    let span = (n - 1 - 2 * m) as f64;
    let t = (x - lo) / span;
    if !(0.0..=1.0).contains(&t) {
        return (0.0, 0.0);
    }
    let s = math::sin(PI * t);
    let c = math::cos(PI * t);
    (s * s, 2.0 * s * c * PI / span)
}

/// Analytic height and slope of the scene at pixel `(x, y)`.
fn scene_sample(scene: &SceneSpec, x: f64, y: f64) -> (f64, f64, f64) {
    match scene.indenter {
        Indenter::Flat => (0.0, 0.0, 0.0),
        Indenter::Sphere { radius, center, depth } => {
            let (dx, dy) = (x - center[0], y - center[1]);
            let r2 = dx * dx + dy * dy;
            if r2 >= radius * radius {
                return (0.0, 0.0, 0.0);
            }
            let s = math::sqrt(radius * radius - r2);
            let z = depth - (radius - s);
            if z <= 0.0 {
                return (0.0, 0.0, 0.0);
            }
            (z, -dx / s, -dy / s)
        }
        Indenter::Gaussian { sigma, amplitude, center } => {
            let (dx, dy) = (x - center[0], y - center[1]);
            let z = amplitude * math::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            let k = -1.0 / (sigma * sigma);
            (z, k * dx * z, k * dy * z)
        }
        Indenter::ScrewThread { pitch, depth } => {
            let m = defaults::SCENE_MARGIN_PX;
            let (wx, dwx) = hann(x, scene.width, m);
            let (wy, dwy) = hann(y, scene.height, m);
            let phase = 2.0 * PI * x / pitch;
            let ridge = 0.5 * (1.0 - math::cos(phase));
            let dridge = 0.5 * math::sin(phase) * 2.0 * PI / pitch;
            let z = depth * ridge * wx * wy;
            (z, depth * (dridge * wx + ridge * dwx) * wy, depth * ridge * wx * dwy)
        }
    }
}

fn is_ring(x: usize, y: usize, w: usize, h: usize) -> bool {
    x == 0 || y == 0 || x == w - 1 || y == h - 1
}

/// Analytic depth of a scene; the outer pixel ring is exactly zero.
pub fn depth_of_scene(scene: &SceneSpec) -> Result<DepthMap, RenderError> {
    scene.validate()?;
    let (w, h) = (scene.width, scene.height);
    let mut z = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            z.push(if is_ring(x, y, w, h) { 0.0 } else { scene_sample(scene, x as f64, y as f64).0 });
        }
    }
    Ok(DepthMap::new(w, h, z).expect("finite scene"))
}

/// Analytic pixel-centred slopes of a scene (zero on the outer ring).
pub fn gradients_of_scene(scene: &SceneSpec) -> Result<GradientField, RenderError> {
    scene.validate()?;
    let (w, h) = (scene.width, scene.height);
    let mut p = Vec::with_capacity(w * h);
    let mut q = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (_, gp, gq) =
                if is_ring(x, y, w, h) { (0.0, 0.0, 0.0) } else { scene_sample(scene, x as f64, y as f64) };
            p.push(gp);
            q.push(gq);
        }
    }
    Ok(GradientField::new(w, h, p, q).expect("finite scene"))
}

/// Additive Gaussian sensor noise, reproducible from its seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Noise {
    pub sigma: f64,
    pub seed: u64,
}

/// Shades `depth` under `rig`, optionally adding noise before the final clip.
pub fn render(depth: &DepthMap, rig: &LightRig, noise: Option<Noise>) -> Result<TactileFrame, RenderError> {
    rig.validate()?;
    let grad = GradientField::central_differences(depth);
    let ch = rig.channels();
    let mut data = Vec::with_capacity(depth.width() * depth.height() * ch);
    for (&p, &q) in grad.p().iter().zip(grad.q()) {
        let inv = 1.0 / math::sqrt(1.0 + p * p + q * q);
        let n = [-p * inv, -q * inv, inv];
        for l in &rig.lights {
            let d = l.direction;
            let lambert = (n[0] * d[0] + n[1] * d[1] + n[2] * d[2]).max(0.0);
            data.push((rig.albedo * lambert + l.ambient).clamp(0.0, 1.0));
        }
    }
    if let Some(Noise { sigma, seed }) = noise {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(RenderError::BadNoise(sigma));
        }
        if sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in data.iter_mut() {
                let n: f64 = StandardNormal.sample(&mut rng);
                *v = (*v + sigma * n).clamp(0.0, 1.0);
            }
        }
    }
    Ok(TactileFrame::new(depth.width(), depth.height(), ch, data).expect("clipped shading"))
}

/// The no-contact image: the rig shading a flat gel.
pub fn reference_of(rig: &LightRig, width: usize, height: usize) -> Result<TactileFrame, RenderError> {
    render(&DepthMap::zeros(width, height), rig, None)
}

/// Renders `(pressed frame, reference)` for a scene. With noise enabled the
/// reference draws from `seed + 1` so the two captures are independent.
pub fn render_scene(scene: &SceneSpec) -> Result<(TactileFrame, TactileFrame), RenderError> {
    let depth = depth_of_scene(scene)?;
    let (frame_noise, ref_noise) = match scene.seed {
        Some(seed) if scene.noise_sigma > 0.0 => (
            Some(Noise { sigma: scene.noise_sigma, seed }),
            Some(Noise { sigma: scene.noise_sigma, seed: seed.wrapping_add(1) }),
        ),
        _ => (None, None),
    };
    let frame = render(&depth, &scene.rig, frame_noise)?;
    let reference = render(&DepthMap::zeros(scene.width, scene.height), &scene.rig, ref_noise)?;
    Ok((frame, reference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DifferenceFrame;

    #[test]
    fn flat_scene_has_zero_depth_and_constant_image() {
        let scene = SceneSpec::new(16, 12, Indenter::Flat);
        assert!(depth_of_scene(&scene).unwrap().z().iter().all(|&v| v == 0.0));
        let rig = LightRig::three_color();
        let frame = reference_of(&rig, 16, 12).unwrap();
        for y in 0..12 {
            for x in 0..16 {
                for (c, l) in rig.lights.iter().enumerate() {
                    let expect = rig.albedo * l.direction[2] + l.ambient;
                    assert_eq!(frame.get(x, y, c), expect);
                }
            }
        }
    }

    #[test]
    fn sphere_center_equals_press_depth() {
        let scene = SceneSpec::new(
            64,
            64,
            Indenter::Sphere { radius: 20.0, center: [32.0, 32.0], depth: 2.0 },
        );
        assert_eq!(depth_of_scene(&scene).unwrap().at(32, 32), 2.0);
    }

    #[test]
    fn reference_is_render_of_zero_depth_and_deterministic() {
        let rig = LightRig::two_color();
        let a = reference_of(&rig, 10, 9).unwrap();
        let b = render(&DepthMap::zeros(10, 9), &rig, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, reference_of(&rig, 10, 9).unwrap());
        let d = DifferenceFrame::between(&a, &a).unwrap();
        assert!(d.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tilting_toward_a_light_brightens_its_channel() {
        let rig = LightRig::three_color();
        // Light 0 sits at azimuth 0 (+x); a surface facing +x has dz/dx < 0.
        let mut last = -1.0;
        for k in 0..6 {
            let slope = -0.1 * k as f64;
            let z = (0..25).map(|i| slope * (i % 5) as f64).collect();
            let f = render(&DepthMap::new(5, 5, z).unwrap(), &rig, None).unwrap();
            let v = f.get(2, 2, 0);
            assert!(v > last, "slope {slope}: {v} <= {last}");
            last = v;
        }
    }

    #[test]
    fn validation_errors() {
        let s = SceneSpec::new(32, 32, Indenter::Sphere { radius: 20.0, center: [5.0, 16.0], depth: 2.0 });
        assert!(matches!(s.validate(), Err(RenderError::OutOfMargin { .. })));
        let s = SceneSpec::new(64, 64, Indenter::Gaussian { sigma: 5.0, amplitude: 9.0, center: [32.0, 32.0] });
        assert!(matches!(s.validate(), Err(RenderError::TooDeep { .. })));
        let mut s = SceneSpec::new(16, 16, Indenter::Flat);
        s.noise_sigma = 0.1;
        assert_eq!(s.validate(), Err(RenderError::MissingSeed));
        let mut rig = LightRig::three_color();
        rig.lights[1].direction = [0.0, 0.0, -1.0];
        assert_eq!(rig.validate(), Err(RenderError::BadLight(1)));
    }

    #[test]
    fn seeded_noise_reproduces_exactly() {
        let scene = SceneSpec::new(20, 20, Indenter::Flat).with_noise(0.02, 7);
        assert_eq!(render_scene(&scene).unwrap(), render_scene(&scene).unwrap());
        let other = SceneSpec::new(20, 20, Indenter::Flat).with_noise(0.02, 8);
        assert_ne!(render_scene(&scene).unwrap().0, render_scene(&other).unwrap().0);
    }
}
