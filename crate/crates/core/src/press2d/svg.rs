//! SVG 1.1 drawing of a press equilibrium.
//!
//! Coordinates are millimetres with `y` pointing up in the model and down
//! in the document. Each contact arc is a `polyline` of class `contact`
//! carrying its arc-length span in `data-start`/`data-end` (metres).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::math;

use super::{core_height, ContactReport2D, ObjectProfile, PalmConfig, Placement, PressError};

const MM: f64 = 1000.0;

fn pt(out: &mut String, p: [f64; 2]) {
    // Adding zero folds -0.0 into 0.0 so flat geometry prints without signs.
    let _ = write!(out, "{:.4},{:.4} ", p[0] * MM + 0.0, -p[1] * MM + 0.0);
}

fn polyline(class: &str, points: &[[f64; 2]], extra: &str) -> String {
    let mut s = String::new();
    let _ = write!(s, "<polyline class=\"{class}\"{extra} points=\"");
    for &p in points {
        pt(&mut s, p);
    }
    s.pop();
    s.push_str("\"/>\n");
    s
}

/// Deterministic drawing of beams, gel surface, object and contact arcs.
pub fn render_svg(report: &ContactReport2D, palm: &PalmConfig, obj: &ObjectProfile) -> Result<String, PressError> {
    palm.validate()?;
    let placement = Placement::new(palm, obj)?;
    let polygon = placement.polygon.translated(0.0, -report.achieved_depth);
    let half = palm.half_length;
    let angles = report.beam_angles;

    let (_, top) = polygon.vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[1]), hi.max(p[1])));
    let margin = 0.005;
    let x0 = (-half - margin) * MM;
    let w = (2.0 * (half + margin)) * MM;
    let bottom = -half * math::tan(palm.hard_stop.max(0.0)) - margin;
    let y0 = -(top + margin) * MM;
    let h = (top + margin - bottom) * MM;

    let mut out = String::new();
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{x0:.4} {y0:.4} {w:.4} {h:.4}\" width=\"{w:.4}mm\" height=\"{h:.4}mm\">\n"
    );
    out.push_str("<g fill=\"none\" stroke-linejoin=\"round\">\n");

    let tip_l = [0.0, core_height(0.0, true, angles, half)];
    let tip_r = [0.0, core_height(0.0, false, angles, half)];
    out.push_str(&polyline("beam", &[[-half, 0.0], tip_l], " stroke=\"#444\" stroke-width=\"0.6\""));
    out.push_str(&polyline("beam", &[tip_r, [half, 0.0]], " stroke=\"#444\" stroke-width=\"0.6\""));

    if palm.gel.present {
        let g = palm.gel.thickness;
        let pts = [[-half, g], [tip_l[0], tip_l[1] + g], [tip_r[0], tip_r[1] + g], [half, g]];
        out.push_str(&polyline("gel", &pts, " stroke=\"#2a9d8f\" stroke-width=\"0.3\""));
    }

    let mut poly = String::from("<polygon class=\"object\" stroke=\"#264653\" stroke-width=\"0.2\" points=\"");
    for &p in &polygon.vertices {
        pt(&mut poly, p);
    }
    poly.pop();
    poly.push_str("\"/>\n");
    out.push_str(&poly);

    for iv in &report.contact_intervals {
        let mut pts: Vec<[f64; 2]> = Vec::new();
        pts.push(polygon.point_at(iv.start));
        let mut acc = 0.0;
        for (a, b) in polygon.edges() {
            acc += super::profile::dist(a, b);
            if acc > iv.start && acc < iv.end {
                pts.push(b);
            }
        }
        pts.push(polygon.point_at(iv.end));
        let extra = alloc::format!(" data-start=\"{:.9}\" data-end=\"{:.9}\" stroke=\"#e76f51\" stroke-width=\"0.8\"", iv.start, iv.end);
        out.push_str(&polyline("contact", &pts, &extra));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::press2d::{equilibrium, PalmVariant, Shape};

    #[test]
    fn flat_palm_drawing_at_zero_depth() {
        let palm = PalmConfig::shipped();
        let obj = ObjectProfile::new(Shape::by_name("cube").unwrap());
        let report = equilibrium(&palm, &obj, 0.0).unwrap();
        let svg = render_svg(&report, &palm, &obj).unwrap();
        assert!(svg.contains("class=\"beam\" stroke=\"#444\" stroke-width=\"0.6\" points=\"-40.0000,0.0000 0.0000,0.0000\""));
        assert!(!svg.contains("class=\"contact\""));
    }

    #[test]
    fn identical_inputs_identical_bytes() {
        let palm = PalmConfig::shipped().variant(PalmVariant::Both);
        let obj = ObjectProfile::new(Shape::by_name("star").unwrap());
        let r = equilibrium(&palm, &obj, 0.002).unwrap();
        assert_eq!(render_svg(&r, &palm, &obj).unwrap(), render_svg(&r, &palm, &obj).unwrap());
    }
}
