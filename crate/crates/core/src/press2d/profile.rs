//! Object cross-sections as simple polygons.

use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PressError;
use crate::defaults::press as dflt;
use crate::math;

/// Cross-section of a constant-profile object. Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    Cylinder { radius: f64 },
    Cube { edge: f64 },
    /// Two crossed bars of width `arm_width`, tip to tip `span`.
    Plus { arm_width: f64, span: f64 },
    /// Five-pointed star.
    Star { outer_radius: f64, inner_radius: f64 },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Cylinder { .. } => "cylinder",
            Shape::Cube { .. } => "cube",
            Shape::Plus { .. } => "plus",
            Shape::Star { .. } => "star",
        }
    }

    /// The shipped size for a shape name.
    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "cylinder" => Shape::Cylinder { radius: dflt::CYLINDER_RADIUS },
            "cube" => Shape::Cube { edge: dflt::CUBE_EDGE },
            "plus" => Shape::Plus { arm_width: dflt::PLUS_ARM_WIDTH, span: dflt::PLUS_SPAN },
            "star" => Shape::Star { outer_radius: dflt::STAR_OUTER_RADIUS, inner_radius: dflt::STAR_INNER_RADIUS },
            _ => return None,
        })
    }

    /// Shipped press depth for this shape, m.
    pub fn default_depth(&self) -> f64 {
        let i = match self {
            Shape::Cylinder { .. } => 0,
            Shape::Cube { .. } => 1,
            Shape::Plus { .. } => 2,
            Shape::Star { .. } => 3,
        };
        dflt::DEPTHS[i]
    }

    fn validate(&self) -> Result<(), PressError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let valid = match *self {
            Shape::Cylinder { radius } => ok(radius),
            Shape::Cube { edge } => ok(edge),
            Shape::Plus { arm_width, span } => ok(arm_width) && ok(span) && span > arm_width,
            Shape::Star { outer_radius, inner_radius } => {
                ok(outer_radius) && ok(inner_radius) && inner_radius < outer_radius
            }
        };
        if valid {
            Ok(())
        } else {
            Err(PressError::BadProfile("shape dimensions must be positive and consistent"))
        }
    }

    /// Counter-clockwise vertices centred on the origin, unrotated.
    fn vertices(&self) -> Vec<[f64; 2]> {
        match *self {
            Shape::Cylinder { radius } => {
                let n = dflt::CIRCLE_VERTICES;
                (0..n)
                    .map(|k| {
                        let a = -PI / 2.0 + 2.0 * PI * k as f64 / n as f64;
                        [radius * math::cos(a), radius * math::sin(a)]
                    })
                    .collect()
            }
            Shape::Cube { edge } => {
                let h = edge / 2.0;
                [[h, -h], [h, h], [-h, h], [-h, -h]].to_vec()
            }
            Shape::Plus { arm_width, span } => {
                let (w, s) = (arm_width / 2.0, span / 2.0);
                [
                    [w, -s],
                    [w, -w],
                    [s, -w],
                    [s, w],
                    [w, w],
                    [w, s],
                    [-w, s],
                    [-w, w],
                    [-s, w],
                    [-s, -w],
                    [-w, -w],
                    [-w, -s],
                ]
                .to_vec()
            }
            Shape::Star { outer_radius, inner_radius } => (0..10)
                .map(|k| {
                    let r = if k % 2 == 0 { outer_radius } else { inner_radius };
                    let a = -PI / 2.0 + PI * k as f64 / 5.0;
                    [r * math::cos(a), r * math::sin(a)]
                })
                .collect(),
        }
    }

    /// Rotation that presents a convex corner straight down; zero for the
    /// cylinder and the star (whose first tip already points down).
    pub fn corner_down_rotation(&self) -> f64 {
        match *self {
            Shape::Cylinder { .. } | Shape::Star { .. } => 0.0,
            Shape::Cube { .. } => PI / 4.0,
            Shape::Plus { arm_width, span } => -math::atan(arm_width / span),
        }
    }
}

/// Rigid placement of a profile: counter-clockwise rotation (rad) about the
/// shape centre, then a horizontal shift of the lowest point away from the
/// palm junction (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub rotation: f64,
    #[serde(default)]
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectProfile {
    pub shape: Shape,
    /// Defaults to a convex corner pointing down, centred on the junction.
    #[serde(default)]
    pub pose: Option<Pose>,
}

impl ObjectProfile {
    pub fn new(shape: Shape) -> Self {
        Self { shape, pose: None }
    }

    pub fn with_pose(shape: Shape, pose: Pose) -> Self {
        Self { shape, pose: Some(pose) }
    }

    pub fn pose(&self) -> Pose {
        self.pose.unwrap_or(Pose { rotation: self.shape.corner_down_rotation(), offset: 0.0 })
    }

    /// Posed polygon with its lowest point at `(offset, 0)`, vertices
    /// counter-clockwise starting from the highest vertex.
    pub fn polygon(&self) -> Result<Polygon, PressError> {
        self.shape.validate()?;
        let pose = self.pose();
        if !(pose.rotation.is_finite() && pose.offset.is_finite()) {
            return Err(PressError::BadProfile("pose must be finite"));
        }
        let (s, c) = (math::sin(pose.rotation), math::cos(pose.rotation));
        let mut pts: Vec<[f64; 2]> = self.shape.vertices().iter().map(|&[x, y]| [c * x - s * y, s * x + c * y]).collect();

        let y_min = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
        let lowest: Vec<f64> = pts.iter().filter(|p| p[1] - y_min <= 1e-12).map(|p| p[0]).collect();
        let x_low = lowest.iter().sum::<f64>() / lowest.len() as f64;
        for p in pts.iter_mut() {
            p[0] += pose.offset - x_low;
            p[1] -= y_min;
        }

        let top = (0..pts.len())
            .max_by(|&a, &b| pts[a][1].total_cmp(&pts[b][1]).then(b.cmp(&a)))
            .expect("non-empty polygon");
        pts.rotate_left(top);
        Ok(Polygon { vertices: pts })
    }
}

/// Closed polygon; edge `i` joins vertex `i` to vertex `i + 1 (mod n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self { vertices: self.vertices.iter().map(|&[x, y]| [x + dx, y + dy]).collect() }
    }

    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| dist(a, b)).sum()
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])))
    }

    /// Point at arc length `s` along the boundary, starting from vertex 0.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let mut acc = 0.0;
        for (a, b) in self.edges() {
            let len = dist(a, b);
            if s <= acc + len || len == 0.0 && s <= acc {
                let t = if len > 0.0 { ((s - acc) / len).clamp(0.0, 1.0) } else { 0.0 };
                return lerp(a, b, t);
            }
            acc += len;
        }
        self.vertices[0]
    }

    /// Lower boundary `y = f(x)` as linear pieces `(x0, y0, x1, y1)` with
    /// `x0 < x1`, covering the polygon's x-range.
    pub fn lower_envelope(&self) -> Vec<[f64; 4]> {
        let mut xs: Vec<f64> = self.vertices.iter().map(|p| p[0]).collect();
        xs.sort_by(f64::total_cmp);
        let (lo, hi) = self.x_range();
        let tol = 1e-12 * (hi - lo).max(f64::MIN_POSITIVE);
        xs.dedup_by(|b, a| *b - *a <= tol);
        let mut pieces = Vec::with_capacity(xs.len());
        for win in xs.windows(2) {
            let (xa, xb) = (win[0], win[1]);
            let xm = 0.5 * (xa + xb);
            let mut best: Option<(f64, [f64; 2], [f64; 2])> = None;
            for (a, b) in self.edges() {
                let (lo, hi) = if a[0] < b[0] { (a, b) } else { (b, a) };
                if !(lo[0] <= xa + tol && hi[0] >= xb - tol) || hi[0] - lo[0] <= tol {
                    continue;
                }
                let ym = line_y(lo, hi, xm);
                if best.is_none_or(|(y, _, _)| ym < y) {
                    best = Some((ym, lo, hi));
                }
            }
            if let Some((_, lo, hi)) = best {
                pieces.push([xa, line_y(lo, hi, xa), xb, line_y(lo, hi, xb)]);
            }
        }
        pieces
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    math::sqrt(dx * dx + dy * dy)
}

pub(crate) fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn line_y(lo: [f64; 2], hi: [f64; 2], x: f64) -> f64 {
    lo[1] + (hi[1] - lo[1]) * (x - lo[0]) / (hi[0] - lo[0])
}
