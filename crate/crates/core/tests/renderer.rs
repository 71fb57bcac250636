use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tacpalm_core::photometric::{estimate_gradients, fit_calibration, EstimateOptions};
use tacpalm_core::poisson::integrate;
use tacpalm_core::renderer::{
    depth_of_scene, gradients_of_scene, reference_of, render, render_scene, Indenter, LightRig, Noise, RenderError,
    SceneSpec,
};
use tacpalm_core::{DepthMap, DifferenceFrame, GradientField, TactileFrame};

fn rotate_depth(d: &DepthMap) -> DepthMap {
    // (x, y) -> (h - 1 - y, x): a quarter turn taking +x to +y.
    let (w, h) = (d.width(), d.height());
    let mut z = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            z[x * h + (h - 1 - y)] = d.at(x, y);
        }
    }
    DepthMap::new(h, w, z).unwrap()
}

fn rotate_frame(f: &TactileFrame) -> TactileFrame {
    let (w, h, c) = f.shape();
    let mut data = vec![0.0; w * h * c];
    for y in 0..h {
        for x in 0..w {
            for k in 0..c {
                data[(x * h + (h - 1 - y)) * c + k] = f.get(x, y, k);
            }
        }
    }
    TactileFrame::new(h, w, c, data).unwrap()
}

#[test]
fn flat_scene_renders_the_lambert_constant() {
    let rig = LightRig::three_color();
    let f = reference_of(&rig, 6, 5).unwrap();
    for (k, l) in rig.lights.iter().enumerate() {
        let expect = rig.albedo * l.direction[2] + l.ambient;
        assert!((0..5).all(|y| (0..6).all(|x| f.get(x, y, k) == expect)));
    }
    assert_eq!(f, render(&DepthMap::zeros(6, 5), &rig, None).unwrap());
}

#[test]
fn sphere_centre_depth_is_exact() {
    let s = SceneSpec::new(64, 64, Indenter::Sphere { radius: 20.0, center: [32.0, 32.0], depth: 2.0 });
    let d = depth_of_scene(&s).unwrap();
    assert_eq!(d.at(32, 32), 2.0);
    assert!(d.boundary_is_zero());
}

#[test]
fn gaussian_slopes_match_finite_differences() {
    let s = SceneSpec::new(96, 96, Indenter::Gaussian { sigma: 10.0, amplitude: 1.0, center: [47.0, 48.5] });
    let g = gradients_of_scene(&s).unwrap();
    // Fine central differences of the closed form, away from the ring.
    let (sigma, cx, cy) = (10.0f64, 47.0, 48.5);
    let z = |x: f64, y: f64| (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * sigma * sigma)).exp();
    let h = 1e-4;
    for y in 1..95 {
        for x in 1..95 {
            let (xf, yf) = (x as f64, y as f64);
            let p = (z(xf + h, yf) - z(xf - h, yf)) / (2.0 * h);
            let q = (z(xf, yf + h) - z(xf, yf - h)) / (2.0 * h);
            let (gp, gq) = g.at(x, y);
            assert!((gp - p).abs() <= 1e-4 && (gq - q).abs() <= 1e-4);
        }
    }
    // And the pixel-grid differences of the rendered depth agree to the
    // discretization error of a sigma = 10 px bump.
    let fd = GradientField::central_differences(&depth_of_scene(&s).unwrap());
    let worst = fd.p().iter().zip(g.p()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn tilting_toward_a_light_brightens_it() {
    let rig = LightRig::three_color();
    let (w, h) = (5, 5);
    for (k, l) in rig.lights.iter().enumerate() {
        let [dx, dy, _] = l.direction;
        let mut last = -1.0;
        for step in 0..6 {
            let s = -0.1 * step as f64;
            // A plane whose normal leans toward the light's azimuth.
            let z = (0..w * h).map(|i| s * (dx * (i % w) as f64 + dy * (i / w) as f64)).collect();
            let v = render(&DepthMap::new(w, h, z).unwrap(), &rig, None).unwrap().get(2, 2, k);
            assert!(v > last || v == 1.0, "channel {k} step {step}");
            last = v;
        }
    }
}

#[test]
fn seeded_noise_is_reproducible() {
    let s = SceneSpec::new(24, 24, Indenter::Gaussian { sigma: 3.0, amplitude: 1.0, center: [12.0, 12.0] })
        .with_noise(0.02, 9);
    assert_eq!(render_scene(&s).unwrap(), render_scene(&s).unwrap());
    let (f, r) = render_scene(&s).unwrap();
    let other = render_scene(&s.clone().with_noise(0.02, 10)).unwrap().0;
    assert_ne!(f, other);
    // The reference is not a copy of the frame's noise.
    assert_ne!(f.get(0, 0, 0), r.get(0, 0, 0));
}

#[test]
fn noise_without_seed_is_rejected() {
    let mut s = SceneSpec::new(24, 24, Indenter::Flat);
    s.noise_sigma = 0.01;
    assert_eq!(render_scene(&s).unwrap_err(), RenderError::MissingSeed);
    let _ = render(&DepthMap::zeros(4, 4), &LightRig::default(), Some(Noise { sigma: 0.0, seed: 0 })).unwrap();
}

#[test]
fn indenter_outside_margin_is_rejected() {
    let s = SceneSpec::new(32, 32, Indenter::Sphere { radius: 20.0, center: [4.0, 16.0], depth: 2.0 });
    assert!(matches!(depth_of_scene(&s), Err(RenderError::OutOfMargin { .. })));
}

#[test]
fn screw_thread_scene_vanishes_on_the_ring() {
    let s = SceneSpec::new(40, 30, Indenter::ScrewThread { pitch: 6.0, depth: 1.0 });
    let d = depth_of_scene(&s).unwrap();
    assert!(d.boundary_is_zero());
    assert!(d.max_abs() > 0.5);
}

fn round_trip(indenter: Indenter) -> f64 {
    let rig = LightRig::three_color();
    let cal_scene = SceneSpec::new(64, 64, Indenter::Sphere { radius: 20.0, center: [32.0, 32.0], depth: 1.5 });
    let (f, r) = render_scene(&cal_scene).unwrap();
    let truth_g = GradientField::central_differences(&depth_of_scene(&cal_scene).unwrap());
    let calib = fit_calibration(&[(DifferenceFrame::between(&f, &r).unwrap(), truth_g)], rig.channels()).unwrap();

    let scene = SceneSpec::new(64, 64, indenter);
    let (f, r) = render_scene(&scene).unwrap();
    let est = estimate_gradients(
        &DifferenceFrame::between(&f, &r).unwrap(),
        &calib,
        EstimateOptions { noise_floor: 0.0 },
    )
    .unwrap();
    let z = integrate(&est.field.to_forward_staggered()).unwrap();
    let truth = depth_of_scene(&scene).unwrap();
    let err: f64 = z.z().iter().zip(truth.z()).map(|(a, b)| (a - b).powi(2)).sum();
    let norm: f64 = truth.z().iter().map(|b| b * b).sum();
    (err / norm).sqrt()
}

#[test]
fn gaussian_round_trip_within_five_percent() {
    let e = round_trip(Indenter::Gaussian { sigma: 8.0, amplitude: 1.0, center: [31.5, 31.5] });
    assert!(e <= 0.05, "{e}");
}

#[test]
fn sphere_round_trip_within_five_percent() {
    let e = round_trip(Indenter::Sphere { radius: 30.0, center: [32.0, 32.0], depth: 1.0 });
    assert!(e <= 0.05, "{e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn quarter_turn_commutes_with_render(seed in any::<u64>(), w in 3usize..12, h in 3usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = (0..w * h).map(|_| rng.random_range(-0.5..0.5)).collect();
        let d = DepthMap::new(w, h, z).unwrap();
        let rig = LightRig::three_color();
        let a = rotate_frame(&render(&d, &rig, None).unwrap());
        let b = render(&rotate_depth(&d), &rig.rotated(FRAC_PI_2), None).unwrap();
        prop_assert_eq!(a.shape(), b.shape());
        for (u, v) in a.data().iter().zip(b.data()) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }
}
