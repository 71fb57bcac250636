//! Shipped default parameters.
//!
//! Every tunable default of the toolkit lives here so that tests, the CLI
//! and documentation agree on one set of numbers.

use core::f64::consts::PI;

/// Light azimuths of the three-color ring, radians.
pub const LIGHT_AZIMUTHS: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
/// Light elevation above the gel plane, radians (60°).
pub const LIGHT_ELEVATION: f64 = PI / 3.0;
/// Gel albedo.
pub const ALBEDO: f64 = 0.9;
/// Ambient term added to every channel.
pub const AMBIENT: f64 = 0.05;
/// Gel thickness in pixel units; indenter depths may not exceed it.
pub const GEL_THICKNESS_PX: f64 = 4.0;
/// Flat margin (pixels) that every indenter must leave around the image.
pub const SCENE_MARGIN_PX: usize = 2;

/// `max_c |D_c|` below this maps to a zero gradient.
pub const NOISE_FLOOR: f64 = 0.01;
/// Minimum number of pixels with non-zero known gradient for a calibration fit.
pub const MIN_CALIBRATION_PIXELS: usize = 200;

/// Default contact threshold on `max_c |D_c|`.
pub const CONTACT_TAU: f64 = 0.03;

/// Press simulator defaults (SI units).
pub mod press {
    /// Cantilever length from root to the central junction, m.
    pub const HALF_LENGTH: f64 = 0.040;
    /// Beam width out of the drawing plane, m.
    pub const BEAM_WIDTH: f64 = 0.020;
    /// Beam thickness, m.
    pub const BEAM_THICKNESS: f64 = 0.003;
    /// Young's modulus used for the worked palm example, Pa.
    pub const BEAM_MODULUS: f64 = 1.4e9;
    /// Allowable stress used for the worked palm example, Pa.
    pub const BEAM_SIGMA_MAX: f64 = 18.0e6;
    /// Rotational stiffness of each cantilever link, N·m/rad.
    ///
    /// Equals `3·E·I/L`, the rigid-link stiffness that reproduces the tip
    /// compliance of the continuous cantilever above.
    pub const TORSIONAL_STIFFNESS: f64 = 3.0 * BEAM_MODULUS * (BEAM_WIDTH * BEAM_THICKNESS * BEAM_THICKNESS * BEAM_THICKNESS / 12.0) / HALF_LENGTH;
    /// Gel layer thickness, m.
    pub const GEL_THICKNESS: f64 = 0.002;
    /// Winkler foundation stiffness of the gel, N/m per metre of palm.
    pub const GEL_STIFFNESS: f64 = 1.0e6;
    /// Vertices used to discretize circular profiles.
    pub const CIRCLE_VERTICES: usize = 256;
    /// Contact gap threshold when no gel is present, m.
    pub const RIGID_CONTACT_GAP: f64 = 1e-5;
    /// Coarse grid resolution per angle.
    pub const GRID_STEPS: usize = 64;
    /// Coordinate-descent step at which refinement stops, rad.
    ///
    /// Far below the grid spacing so that minima lying on the
    /// non-penetration boundary are pinned to it; a looser stop leaves the
    /// links measurably short of tangency and contact arcs shrink.
    pub const ANGLE_TOLERANCE: f64 = 1e-13;
    /// Energy evaluations allowed in refinement before reporting non-convergence.
    pub const MAX_EVALUATIONS: usize = 20_000;

    /// Cylinder radius, m.
    pub const CYLINDER_RADIUS: f64 = 0.020;
    /// Cube edge, m.
    pub const CUBE_EDGE: f64 = 0.036;
    /// Plus-sign arm width, m.
    pub const PLUS_ARM_WIDTH: f64 = 0.014;
    /// Plus-sign tip-to-tip span, m.
    pub const PLUS_SPAN: f64 = 0.046;
    /// Star outer radius, m.
    pub const STAR_OUTER_RADIUS: f64 = 0.025;
    /// Star inner radius, m.
    pub const STAR_INNER_RADIUS: f64 = 0.011;

    /// Press depth per shape, m: cylinder, cube, plus, star.
    pub const DEPTHS: [f64; 4] = [0.006, 0.006, 0.006, 0.006];
}
