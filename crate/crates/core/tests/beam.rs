use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tacpalm_core::beam::fd::solve_tip_loaded;
use tacpalm_core::beam::{
    deflection, design_report, force_at_sigma_max, hard_stop_deflection, root_stress, BeamError, BeamSpec, Material,
};

fn onyx_like() -> Material {
    Material::new("test", 1.4e9, 36e6).unwrap()
}

fn palm_beam() -> BeamSpec {
    BeamSpec::with_sigma_max(0.040, 0.003, 0.020, onyx_like(), 18e6).unwrap()
}

fn random_spec(rng: &mut impl Rng) -> BeamSpec {
    let strength = 10f64.powf(rng.random_range(6.5..9.0));
    let material = Material::new("r", 10f64.powf(rng.random_range(8.0..11.5)), strength).unwrap();
    BeamSpec::with_sigma_max(
        rng.random_range(0.005..0.3),
        rng.random_range(0.0005..0.01),
        rng.random_range(0.002..0.05),
        material,
        strength * rng.random_range(0.01..0.5),
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn zero_force_is_zero_response() {
    let s = palm_beam();
    assert_eq!(deflection(&s, 0.0).unwrap(), 0.0);
    assert_eq!(root_stress(&s, 0.0).unwrap(), 0.0);
}

#[test]
fn negative_force_is_rejected() {
    let s = palm_beam();
    assert_eq!(deflection(&s, -1.0).unwrap_err(), BeamError::NegativeForce(-1.0));
    assert!(root_stress(&s, -0.5).is_err());
    assert!(design_report(&s, f64::NAN).is_err());
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(Material::new("bad", 0.0, 1.0).is_err());
    assert!(BeamSpec::new(-0.01, 0.003, 0.02, onyx_like()).is_err());
    assert!(matches!(
        BeamSpec::with_sigma_max(0.04, 0.003, 0.02, onyx_like(), 20e6),
        Err(BeamError::SigmaTooHigh { .. })
    ));
}

#[test]
fn doubling_length_scales_deflection_by_eight() {
    let s = palm_beam();
    let mut long = s.clone();
    long.length *= 2.0;
    assert_eq!(deflection(&long, 3.0).unwrap(), 8.0 * deflection(&s, 3.0).unwrap());
}

#[test]
fn stress_inverts_to_force() {
    let s = palm_beam();
    let f = 7.25;
    let sigma = root_stress(&s, f).unwrap();
    let back = sigma * 2.0 * s.second_moment() / (s.length * s.thickness);
    assert!(rel(back, f) <= 1e-15);
}

#[test]
fn palm_beam_hard_stop_is_about_4_571_mm() {
    // (2/3) * 18e6 * 0.04^2 / (1.4e9 * 0.003) = 0.0045714... m
    let expected = 2.0 * 18e6 * 0.0016 / (3.0 * 1.4e9 * 0.003);
    let d = hard_stop_deflection(&palm_beam());
    assert!(rel(d, expected) <= 1e-14);
    assert!((d * 1e3 - 4.571).abs() < 5e-4);
}

#[test]
fn halving_thickness_doubles_hard_stop() {
    let s = palm_beam();
    let mut thin = s.clone();
    thin.thickness /= 2.0;
    assert_eq!(hard_stop_deflection(&thin), 2.0 * hard_stop_deflection(&s));
}

#[test]
fn hard_stop_matches_deflection_at_allowable_stress() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let s = random_spec(&mut rng);
        let via_force = deflection(&s, force_at_sigma_max(&s)).unwrap();
        assert!(rel(via_force, hard_stop_deflection(&s)) <= 1e-12, "{s:?}");
    }
}

#[test]
fn report_flags_elastic_limit() {
    let s = palm_beam();
    let f_star = force_at_sigma_max(&s);
    let r = design_report(&s, 0.5 * f_star).unwrap();
    assert!(r.within_elastic && r.delta < r.delta_max);
    let r = design_report(&s, 1.01 * f_star).unwrap();
    assert!(!r.within_elastic && r.sigma > s.sigma_max);
}

#[test]
fn finite_differences_agree_within_one_percent() {
    let s = palm_beam();
    let f = 5.0;
    let sol = solve_tip_loaded(&s, f, 400);
    assert_eq!(sol.deflection[0], 0.0);
    assert!(rel(sol.tip_deflection(), deflection(&s, f).unwrap()) <= 0.01);
    let sigma_fd = sol.root_moment() * s.thickness / (2.0 * s.second_moment());
    assert!(rel(sigma_fd, root_stress(&s, f).unwrap()) <= 0.01);
}

#[test]
fn finite_differences_converge_at_second_order() {
    let s = palm_beam();
    let exact = deflection(&s, 2.0).unwrap();
    // Halving the spacing: nodes go 1 + 2^k intervals.
    let errs: Vec<f64> =
        [26, 51, 101, 201].iter().map(|&n| (solve_tip_loaded(&s, 2.0, n).tip_deflection() - exact).abs()).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.5..4.5).contains(&ratio), "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hard_stop_is_monotone(seed in any::<u64>(), k in 1.01f64..3.0) {
        let s = random_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let base = hard_stop_deflection(&s);

        let mut t = s.clone();
        t.length *= k;
        prop_assert!(hard_stop_deflection(&t) > base);

        let mut t = s.clone();
        t.sigma_max /= k;
        prop_assert!(hard_stop_deflection(&t) < base);

        let mut t = s.clone();
        t.material.youngs_modulus *= k;
        prop_assert!(hard_stop_deflection(&t) < base);

        let mut t = s.clone();
        t.thickness *= k;
        prop_assert!(hard_stop_deflection(&t) < base);
    }

    #[test]
    fn response_is_linear_in_force(seed in any::<u64>(), f in 0.0f64..100.0, k in 0.0f64..10.0) {
        let s = random_spec(&mut ChaCha8Rng::seed_from_u64(seed));
        let d = deflection(&s, f).unwrap();
        prop_assert!((deflection(&s, k * f).unwrap() - k * d).abs() <= 1e-12 * (k * d).max(f64::MIN_POSITIVE));
    }
}
