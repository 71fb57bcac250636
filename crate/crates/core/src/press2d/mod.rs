//! Quasi-static press of a rigid profile into a two-cantilever palm.
//!
//! The palm is two rigid links of length `L` with torsional springs at
//! their roots (`x = -L` and `x = +L`); their free ends meet at the
//! junction `x = 0`. Under small rotations each link stays over its own
//! half, so the core surface is the height field
//!
//! ```text
//! core(x) = -(x + L) tan(theta_L)   for -L <= x < 0
//! core(x) = -(L - x) tan(theta_R)   for  0 < x <= L
//! ```
//!
//! An optional gel layer of thickness `h` sits on the core and acts as a
//! Winkler foundation: penetration `pen(x)` (object below the gel surface)
//! stores `k_g/2 * pen^2` per unit length and may not exceed `h`.
//!
//! The object is lowered by the press depth from first touch. The beam
//! angles minimize `k_t/2 (theta_L^2 + theta_R^2) + k_g/2 ∫ pen^2 dx` over
//! the box `[0, theta_max]^2` with the rigid core as a hard constraint. When
//! no configuration admits the full depth the object stops at the deepest
//! admissible position and the report is marked `blocked`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam::{self, BeamSpec};
use crate::contact::{self, AreaReport};
use crate::defaults::press as dflt;
use crate::math;

pub mod profile;
pub mod svg;

pub use profile::{ObjectProfile, Polygon, Pose, Shape};

/// Slack allowed when testing the rigid-core constraint, m.
const CORE_TOLERANCE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PressError {
    #[error("invalid palm configuration: {0}")]
    BadPalm(&'static str),
    #[error("invalid object profile: {0}")]
    BadProfile(&'static str),
    #[error("press depth must be finite and non-negative, got {0}")]
    BadDepth(f64),
    #[error("object spans [{lo:.6}, {hi:.6}] m but the palm only covers ±{half:.6} m")]
    ObjectTooWide { lo: f64, hi: f64, half: f64 },
    #[error("refinement did not converge within {0} energy evaluations")]
    NonConvergence(usize),
    #[error("no admissible beam configuration at the requested depth")]
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GelLayer {
    /// Thickness `h`, m.
    pub thickness: f64,
    /// Foundation stiffness `k_g`, N/m per metre of palm.
    pub stiffness: f64,
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PalmConfig {
    /// Length of each cantilever from root to junction, m.
    pub half_length: f64,
    pub n_beams: usize,
    /// Root spring stiffness `k_t`, N m / rad.
    pub torsional_stiffness: f64,
    /// Largest admissible beam rotation, rad.
    pub hard_stop: f64,
    pub gel: GelLayer,
    pub structure_compliant: bool,
}

/// The four palms of the compliance comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PalmVariant {
    None,
    Structure,
    Gel,
    Both,
}

impl PalmVariant {
    pub const ALL: [PalmVariant; 4] = [PalmVariant::None, PalmVariant::Structure, PalmVariant::Gel, PalmVariant::Both];

    pub fn name(self) -> &'static str {
        match self {
            PalmVariant::None => "none",
            PalmVariant::Structure => "structure",
            PalmVariant::Gel => "gel",
            PalmVariant::Both => "both",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl PalmConfig {
    /// Palm whose links match a cantilever's tip stiffness (`3EI/L`) and
    /// hard stop (`atan(delta_max / L)`).
    pub fn from_beam(spec: &BeamSpec, gel: GelLayer) -> Self {
        Self {
            half_length: spec.length,
            n_beams: 2,
            torsional_stiffness: 3.0 * spec.flexural_rigidity() / spec.length,
            hard_stop: beam::hard_stop_angle(spec),
            gel,
            structure_compliant: true,
        }
    }

    /// The shipped dual-compliance palm.
    pub fn shipped() -> Self {
        let material = beam::Material::new("worked example", dflt::BEAM_MODULUS, 2.0 * dflt::BEAM_SIGMA_MAX)
            .expect("valid constants");
        let spec = BeamSpec::with_sigma_max(
            dflt::HALF_LENGTH,
            dflt::BEAM_THICKNESS,
            dflt::BEAM_WIDTH,
            material,
            dflt::BEAM_SIGMA_MAX,
        )
        .expect("valid constants");
        Self::from_beam(
            &spec,
            GelLayer { thickness: dflt::GEL_THICKNESS, stiffness: dflt::GEL_STIFFNESS, present: true },
        )
    }

    /// This palm with structural and gel compliance switched per `variant`.
    pub fn variant(&self, variant: PalmVariant) -> Self {
        let mut cfg = self.clone();
        cfg.structure_compliant = matches!(variant, PalmVariant::Structure | PalmVariant::Both);
        cfg.gel.present = matches!(variant, PalmVariant::Gel | PalmVariant::Both);
        cfg
    }

    pub fn validate(&self) -> Result<(), PressError> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.half_length) {
            return Err(PressError::BadPalm("half_length must be positive"));
        }
        if self.n_beams != 2 {
            return Err(PressError::BadPalm("only two-beam palms are supported"));
        }
        if self.structure_compliant && !(pos(self.torsional_stiffness) && pos(self.hard_stop)) {
            return Err(PressError::BadPalm("compliant structure needs positive stiffness and hard stop"));
        }
        if self.hard_stop >= core::f64::consts::FRAC_PI_2 {
            return Err(PressError::BadPalm("hard stop must be below 90 degrees"));
        }
        if self.gel.present && !(pos(self.gel.thickness) && pos(self.gel.stiffness)) {
            return Err(PressError::BadPalm("gel needs positive thickness and stiffness"));
        }
        Ok(())
    }

    fn angle_limit(&self) -> f64 {
        if self.structure_compliant {
            self.hard_stop
        } else {
            0.0
        }
    }

    fn gel_thickness(&self) -> f64 {
        if self.gel.present {
            self.gel.thickness
        } else {
            0.0
        }
    }
}

/// Arc-length span `[start, end]` along the profile boundary, m, measured
/// counter-clockwise from the profile's highest vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactInterval {
    pub start: f64,
    pub end: f64,
}

impl ContactInterval {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactReport2D {
    pub contact_intervals: Vec<ContactInterval>,
    /// Sum of interval lengths, m.
    pub total_contact: f64,
    /// `(theta_L, theta_R)`, rad.
    pub beam_angles: [f64; 2],
    /// Spring plus gel energy at equilibrium, J.
    pub energy: f64,
    pub requested_depth: f64,
    /// Depth actually reached, m; smaller than requested when blocked.
    pub achieved_depth: f64,
    pub blocked: bool,
    /// Energy after the grid search and after each accepted refinement step.
    pub energy_trace: Vec<f64>,
    pub evaluations: usize,
}

impl ContactReport2D {
    fn at_rest(depth: f64) -> Self {
        Self {
            contact_intervals: Vec::new(),
            total_contact: 0.0,
            beam_angles: [0.0, 0.0],
            energy: 0.0,
            requested_depth: depth,
            achieved_depth: 0.0,
            blocked: false,
            energy_trace: vec![0.0],
            evaluations: 0,
        }
    }
}

/// Placed object: polygon and lower envelope at zero press depth.
struct Placement {
    polygon: Polygon,
    envelope: Vec<[f64; 4]>,
    /// Exact outline of a cylinder, used for the rigid-core constraint and
    /// for contact so results do not depend on the polygon's facets.
    circle: Option<Circle>,
}

impl Placement {
    fn new(palm: &PalmConfig, obj: &ObjectProfile) -> Result<Self, PressError> {
        let mut polygon = obj.polygon()?.translated(0.0, palm.gel_thickness());
        let mut circle = None;
        if let Shape::Cylinder { radius } = obj.shape {
            let n = polygon.vertices.len() as f64;
            let cx = polygon.vertices.iter().map(|v| v[0]).sum::<f64>() / n;
            let cy = polygon.vertices.iter().map(|v| v[1]).sum::<f64>() / n;
            // Rest the true circle, not the polygon, on the surface.
            let lift = palm.gel_thickness() - (cy - radius);
            polygon = polygon.translated(0.0, lift);
            let v0 = polygon.vertices[0];
            let center = [cx, cy + lift];
            circle = Some(Circle {
                center,
                radius,
                top: math::atan2(v0[1] - center[1], v0[0] - center[0]),
                scale: polygon.perimeter() / TAU,
            });
        }
        let (lo, hi) = polygon.x_range();
        let half = palm.half_length;
        if lo <= -half || hi >= half {
            return Err(PressError::ObjectTooWide { lo, hi, half });
        }
        let envelope = polygon.lower_envelope();
        Ok(Self { polygon, envelope, circle })
    }

    /// Smallest vertical clearance between object and rigid core.
    fn core_clearance(&self, descent: f64, angles: [f64; 2], half: f64) -> f64 {
        match &self.circle {
            Some(c) => [true, false]
                .iter()
                .filter_map(|&left| {
                    let (a, s, lo, hi) = side_line(left, angles, half);
                    c.min_gap(descent, a, s, lo, hi)
                })
                .fold(f64::INFINITY, f64::min),
            None => gap_pieces(&self.envelope, descent, angles, half)
                .iter()
                .flat_map(|p| [p[1], p[3]])
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Link surface `y = a + s x` over `[lo, hi]` for one side of the palm.
fn side_line(left: bool, angles: [f64; 2], half: f64) -> (f64, f64, f64, f64) {
    if left {
        let t = math::tan(angles[0]);
        (-half * t, -t, -half, 0.0)
    } else {
        let t = math::tan(angles[1]);
        (-half * t, t, 0.0, half)
    }
}

#[derive(Debug, Clone, Copy)]
struct Circle {
    center: [f64; 2],
    radius: f64,
    /// Polar angle of the polygon's first vertex.
    top: f64,
    /// Polygon arc length per radian of circle.
    scale: f64,
}

impl Circle {
    /// Smallest vertical gap above the line `y = a + s x` on `[lo, hi]`.
    fn min_gap(&self, descent: f64, a: f64, s: f64, lo: f64, hi: f64) -> Option<f64> {
        let [cx, cy] = self.center;
        let r = self.radius;
        let (lo, hi) = (lo.max(cx - r), hi.min(cx + r));
        if lo > hi {
            return None;
        }
        // The lower arc is convex; its slope equals `s` at the tangent point.
        let x = (cx + r * s / math::sqrt(1.0 + s * s)).clamp(lo, hi);
        let u = x - cx;
        Some(cy - descent - math::sqrt((r * r - u * u).max(0.0)) - a - s * x)
    }

    /// Boundary spans within normal distance `threshold` of the surface,
    /// as arc lengths along the polygon.
    fn contact(&self, descent: f64, angles: [f64; 2], half: f64, offset: f64, threshold: f64) -> Vec<ContactInterval> {
        let [cx, cy] = [self.center[0], self.center[1] - descent];
        let r = self.radius;
        let mut spans = Vec::new();
        for left in [true, false] {
            let (a, s, lo, hi) = side_line(left, angles, half);
            let norm = math::sqrt(1.0 + s * s);
            // Signed distance at polar angle `phi` is `d0 + r cos(phi - normal)`.
            let d0 = (cy - a - offset - s * cx) / norm;
            let c = (threshold - d0) / r;
            if c <= -1.0 {
                continue;
            }
            let normal = math::atan2(1.0, -s);
            let w = if c >= 1.0 { PI } else { PI - math::acos(c) };
            let (c0, c1) = (normal + PI - w, normal + PI + w);
            // Points over this link have cos(phi) in [ca, cb].
            let ca = ((lo - cx) / r).clamp(-1.0, 1.0);
            let cb = ((hi - cx) / r).clamp(-1.0, 1.0);
            if ca >= cb {
                continue;
            }
            let (p, q) = (math::acos(cb), math::acos(ca));
            for (w0, w1) in [(p, q), (TAU - q, TAU - p)] {
                for k in -1..=2 {
                    let shift = TAU * k as f64;
                    let (a0, a1) = ((w0 + shift).max(c0), (w1 + shift).min(c1));
                    if a1 > a0 {
                        spans.push((a0, a1));
                    }
                }
            }
        }
        let perimeter = TAU * self.scale;
        let mut out = Vec::new();
        for (a0, a1) in spans {
            let mut rel = (a0 - self.top) % TAU;
            if rel < 0.0 {
                rel += TAU;
            }
            let start = rel * self.scale;
            let end = start + (a1 - a0) * self.scale;
            if end > perimeter {
                out.push(ContactInterval { start, end: perimeter });
                out.push(ContactInterval { start: 0.0, end: end - perimeter });
            } else {
                out.push(ContactInterval { start, end });
            }
        }
        merge(out)
    }
}

/// Sorts and joins touching or overlapping intervals.
fn merge(mut spans: Vec<ContactInterval>) -> Vec<ContactInterval> {
    spans.sort_by(|a, b| a.start.total_cmp(&b.start));
    let mut out: Vec<ContactInterval> = Vec::with_capacity(spans.len());
    for iv in spans {
        match out.last_mut() {
            Some(last) if iv.start - last.end <= 1e-12 => last.end = last.end.max(iv.end),
            _ => out.push(iv),
        }
    }
    out
}

/// Core height under the palm at `x`, evaluated on the side given by `left`
/// (the junction itself belongs to both links).
fn core_height(x: f64, left: bool, angles: [f64; 2], half: f64) -> f64 {
    if left {
        -(x + half) * math::tan(angles[0])
    } else {
        -(half - x) * math::tan(angles[1])
    }
}

/// Linear pieces of `envelope - core` split at the junction, each tagged
/// with its side: `(x0, gap0, x1, gap1)`.
fn gap_pieces(env: &[[f64; 4]], descent: f64, angles: [f64; 2], half: f64) -> Vec<[f64; 4]> {
    let mut out = Vec::with_capacity(env.len() + 1);
    for &[x0, y0, x1, y1] in env {
        let mut push = |xa: f64, ya: f64, xb: f64, yb: f64| {
            let left = xa + xb < 0.0;
            let ga = ya - descent - core_height(xa, left, angles, half);
            let gb = yb - descent - core_height(xb, left, angles, half);
            out.push([xa, ga, xb, gb]);
        };
        if x0 < 0.0 && x1 > 0.0 {
            let ym = y0 + (y1 - y0) * (-x0) / (x1 - x0);
            push(x0, y0, 0.0, ym);
            push(0.0, ym, x1, y1);
        } else {
            push(x0, y0, x1, y1);
        }
    }
    out
}

/// `∫ max(0, -g)^2 dx` for a linear `g` on `[0, len]`.
fn penetration_sq_integral(len: f64, g0: f64, g1: f64) -> f64 {
    let (p0, p1) = (-g0, -g1);
    match (p0 > 0.0, p1 > 0.0) {
        (true, true) => len * (p0 * p0 + p0 * p1 + p1 * p1) / 3.0,
        (false, false) => 0.0,
        (true, false) => {
            let l = len * p0 / (p0 - p1);
            l * p0 * p0 / 3.0
        }
        (false, true) => {
            let l = len * p1 / (p1 - p0);
            l * p1 * p1 / 3.0
        }
    }
}

struct Problem<'a> {
    palm: &'a PalmConfig,
    placement: &'a Placement,
    descent: f64,
    evaluations: usize,
}

impl Problem<'_> {
    /// Total energy, or `None` when the rigid core is penetrated.
    fn energy(&mut self, angles: [f64; 2]) -> Option<f64> {
        self.evaluations += 1;
        let half = self.palm.half_length;
        if self.placement.core_clearance(self.descent, angles, half) < -CORE_TOLERANCE {
            return None;
        }
        let spring = if self.palm.structure_compliant {
            0.5 * self.palm.torsional_stiffness * (angles[0] * angles[0] + angles[1] * angles[1])
        } else {
            0.0
        };
        let mut gel = 0.0;
        if self.palm.gel.present {
            let h = self.palm.gel.thickness;
            for [x0, g0, x1, g1] in gap_pieces(&self.placement.envelope, self.descent, angles, half) {
                gel += penetration_sq_integral(x1 - x0, g0 - h, g1 - h);
            }
            gel *= 0.5 * self.palm.gel.stiffness;
        }
        Some(spring + gel)
    }
}

/// Equilibrium of `obj` pressed `depth` metres into `palm`.
pub fn equilibrium(palm: &PalmConfig, obj: &ObjectProfile, depth: f64) -> Result<ContactReport2D, PressError> {
    palm.validate()?;
    if !(depth.is_finite() && depth >= 0.0) {
        return Err(PressError::BadDepth(depth));
    }
    let placement = Placement::new(palm, obj)?;
    if depth == 0.0 {
        return Ok(ContactReport2D::at_rest(depth));
    }
    let limit = palm.angle_limit();
    let half = palm.half_length;
    let block = placement.core_clearance(0.0, [limit, limit], half).max(0.0);
    let (descent, blocked) = if depth > block { (block, true) } else { (depth, false) };

    let mut problem = Problem { palm, placement: &placement, descent, evaluations: 0 };
    let (angles, energy, trace) = minimize(&mut problem, limit)?;

    let threshold = if palm.gel.present { 0.0 } else { dflt::RIGID_CONTACT_GAP };
    let surface_offset = palm.gel_thickness();
    let contact_intervals = match &placement.circle {
        Some(c) => c.contact(descent, angles, half, surface_offset, threshold),
        None => {
            let polygon = placement.polygon.translated(0.0, -descent);
            contact_arcs(&polygon, angles, half, surface_offset, threshold)
        }
    };
    let total_contact = contact_intervals.iter().map(ContactInterval::length).sum();

    Ok(ContactReport2D {
        contact_intervals,
        total_contact,
        beam_angles: angles,
        energy,
        requested_depth: depth,
        achieved_depth: descent,
        blocked,
        energy_trace: trace,
        evaluations: problem.evaluations,
    })
}

/// Coarse grid over the angle box followed by step-halving coordinate
/// descent.
fn minimize(problem: &mut Problem<'_>, limit: f64) -> Result<([f64; 2], f64, Vec<f64>), PressError> {
    if limit == 0.0 {
        let e = problem.energy([0.0, 0.0]).ok_or(PressError::Infeasible)?;
        return Ok(([0.0, 0.0], e, vec![e]));
    }
    let n = dflt::GRID_STEPS;
    let spacing = limit / (n - 1) as f64;
    let mut best: Option<([f64; 2], f64)> = None;
    for i in 0..n {
        for j in 0..n {
            let a = [spacing * i as f64, spacing * j as f64];
            if let Some(e) = problem.energy(a) {
                if best.is_none_or(|(_, b)| e < b) {
                    best = Some((a, e));
                }
            }
        }
    }
    let (mut angles, mut energy) = best.ok_or(PressError::Infeasible)?;
    let mut trace = vec![energy];
    let mut step = spacing;
    let stop = dflt::ANGLE_TOLERANCE;
    while step >= stop {
        let mut improved = false;
        for k in 0..2 {
            for dir in [-1.0, 1.0] {
                let mut cand = angles;
                cand[k] = (cand[k] + dir * step).clamp(0.0, limit);
                if cand == angles {
                    continue;
                }
                if let Some(e) = problem.energy(cand) {
                    if e < energy {
                        angles = cand;
                        energy = e;
                        trace.push(e);
                        improved = true;
                        break;
                    }
                }
            }
        }
        if problem.evaluations > dflt::MAX_EVALUATIONS {
            return Err(PressError::NonConvergence(dflt::MAX_EVALUATIONS));
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((angles, energy, trace))
}

/// Boundary arcs of `polygon` whose normal distance to the palm surface is
/// below `threshold` (strictly negative = penetration when `threshold` is
/// zero).
fn contact_arcs(polygon: &Polygon, angles: [f64; 2], half: f64, offset: f64, threshold: f64) -> Vec<ContactInterval> {
    // Normal distance to a link is its vertical gap times cos(theta).
    let vertical = [threshold / math::cos(angles[0]), threshold / math::cos(angles[1])];
    let mut raw: Vec<ContactInterval> = Vec::new();
    let mut s = 0.0;
    for (a, b) in polygon.edges() {
        let len = profile::dist(a, b);
        // Split the edge where it crosses the junction.
        let mut cuts = vec![0.0, 1.0];
        if (a[0] < 0.0 && b[0] > 0.0) || (a[0] > 0.0 && b[0] < 0.0) {
            cuts.insert(1, -a[0] / (b[0] - a[0]));
        }
        for w in cuts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 <= t0 {
                continue;
            }
            let (p0, p1) = (profile::lerp(a, b, t0), profile::lerp(a, b, t1));
            let left = p0[0] + p1[0] < 0.0;
            // Only the part of the edge above the palm can touch it.
            let (u0, u1) = clip_to_palm(p0[0], p1[0], half);
            if u1 <= u0 {
                continue;
            }
            let at = |u: f64| {
                let p = profile::lerp(p0, p1, u);
                p[1] - core_height(p[0], left, angles, half) - offset - vertical[usize::from(!left)]
            };
            let (g0, g1) = (at(u0), at(u1));
            let span = match (g0 < 0.0, g1 < 0.0) {
                (true, true) => Some((u0, u1)),
                (false, false) => None,
                (true, false) => Some((u0, u0 + (u1 - u0) * g0 / (g0 - g1))),
                (false, true) => Some((u0 + (u1 - u0) * g0 / (g0 - g1), u1)),
            };
            if let Some((v0, v1)) = span {
                let start = s + len * (t0 + (t1 - t0) * v0);
                let end = s + len * (t0 + (t1 - t0) * v1);
                if end > start {
                    match raw.last_mut() {
                        Some(last) if start - last.end <= 1e-12 => last.end = end,
                        _ => raw.push(ContactInterval { start, end }),
                    }
                }
            }
        }
        s += len;
    }
    raw
}

/// Sub-range of `[0, 1]` along `x0 -> x1` that lies within `[-half, half]`.
fn clip_to_palm(x0: f64, x1: f64, half: f64) -> (f64, f64) {
    if x0 == x1 {
        return if x0.abs() <= half { (0.0, 1.0) } else { (1.0, 0.0) };
    }
    let ta = (-half - x0) / (x1 - x0);
    let tb = (half - x0) / (x1 - x0);
    let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
    (lo.max(0.0), hi.min(1.0))
}

/// One variant's outcome inside a [`SweepReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub variant: PalmVariant,
    pub report: ContactReport2D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub shape: String,
    pub depth: f64,
    /// In the order none, structure, gel, both.
    pub variants: Vec<VariantReport>,
    /// Total contact per variant, ordered largest first.
    pub comparison: AreaReport,
}

impl SweepReport {
    pub fn total(&self, variant: PalmVariant) -> f64 {
        self.variants.iter().find(|v| v.variant == variant).map_or(0.0, |v| v.report.total_contact)
    }
}

/// Presses the same object, pose and depth into all four palm variants
/// derived from `palm`.
pub fn compliance_sweep(palm: &PalmConfig, obj: &ObjectProfile, depth: f64) -> Result<SweepReport, PressError> {
    let mut variants = Vec::with_capacity(4);
    for v in PalmVariant::ALL {
        let report = equilibrium(&palm.variant(v), obj, depth)?;
        variants.push(VariantReport { variant: v, report });
    }
    let rows: Vec<(String, f64)> = variants.iter().map(|v| (String::from(v.variant.name()), v.report.total_contact)).collect();
    let comparison = contact::area_report(&rows).expect("four entries");
    Ok(SweepReport { shape: String::from(obj.shape.name()), depth, variants, comparison })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cylinder() -> ObjectProfile {
        ObjectProfile::new(Shape::by_name("cylinder").unwrap())
    }

    #[test]
    fn zero_depth_is_at_rest() {
        for v in PalmVariant::ALL {
            let r = equilibrium(&PalmConfig::shipped().variant(v), &cylinder(), 0.0).unwrap();
            assert_eq!(r.total_contact, 0.0);
            assert_eq!(r.beam_angles, [0.0, 0.0]);
            assert!(r.contact_intervals.is_empty());
        }
    }

    #[test]
    fn rigid_palm_blocks_immediately() {
        let r = equilibrium(&PalmConfig::shipped().variant(PalmVariant::None), &cylinder(), 0.003).unwrap();
        assert!(r.blocked);
        assert_eq!(r.achieved_depth, 0.0);
        assert_eq!(r.contact_intervals.len(), 1);
    }

    #[test]
    fn rigid_cylinder_contact_is_the_exact_circle_arc() {
        let r = equilibrium(&PalmConfig::shipped().variant(PalmVariant::None), &cylinder(), 0.001).unwrap();
        let radius = dflt::CYLINDER_RADIUS;
        let arc = 2.0 * radius * libm::acos(1.0 - dflt::RIGID_CONTACT_GAP / radius);
        // Reported along the polygon, whose perimeter is n 2r sin(pi/n).
        let n = dflt::CIRCLE_VERTICES as f64;
        let scale = n * libm::sin(PI / n) / PI;
        assert!((r.total_contact - arc * scale).abs() < 1e-15, "{}", r.total_contact);
    }

    #[test]
    fn too_wide_object() {
        let obj = ObjectProfile::new(Shape::Cylinder { radius: 0.05 });
        assert!(matches!(
            equilibrium(&PalmConfig::shipped(), &obj, 0.001),
            Err(PressError::ObjectTooWide { .. })
        ));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(equilibrium(&PalmConfig::shipped(), &cylinder(), -1.0), Err(PressError::BadDepth(-1.0)));
        let mut palm = PalmConfig::shipped();
        palm.n_beams = 3;
        assert!(matches!(equilibrium(&palm, &cylinder(), 0.001), Err(PressError::BadPalm(_))));
    }

    #[test]
    fn penetration_integral_closed_forms() {
        assert_eq!(penetration_sq_integral(2.0, -1.0, -1.0), 2.0);
        assert_eq!(penetration_sq_integral(3.0, 1.0, 2.0), 0.0);
        // Triangle from 0 to 1 penetration over length 1: ∫ t^2 dt = 1/3.
        assert!((penetration_sq_integral(2.0, 1.0, -1.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn shipped_palm_matches_beam_model() {
        let palm = PalmConfig::shipped();
        assert!((palm.hard_stop - libm::atan(0.032 / 7.0 / 0.04)).abs() < 1e-15);
        let ei = 1.4e9 * 0.02 * (0.003 * 0.003 * 0.003) / 12.0;
        assert!((palm.torsional_stiffness - 3.0 * ei / 0.04).abs() < 1e-12);
    }
}
