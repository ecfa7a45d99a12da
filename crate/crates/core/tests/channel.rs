mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thz_relay::channel::{misalignment_gain, sample_rayleigh, ChannelError};
use thz_relay::{
    beam_geometry, molecular_absorption, path_gain, sample_misalignment, AbsorptionModel,
    AbsorptionTable, ChannelParams,
};

fn params(jitter: f64) -> ChannelParams {
    ChannelParams {
        center_frequency: 300e9,
        bandwidth: 50e9,
        gain_budget: 1e10,
        half_power_beamwidth: 0.9f64.to_radians(),
        jitter_std: jitter,
        rx_aperture_radius: 0.046,
        absorption: AbsorptionModel::standard_atmosphere(),
    }
}

fn rayleigh_cdf(sigma: f64) -> impl Fn(f64) -> f64 {
    move |x| 1.0 - (-x * x / (2.0 * sigma * sigma)).exp()
}

#[test]
fn rayleigh_draws_pass_ks() {
    for (seed, sigma) in [(1, 0.05), (2, 0.2)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..200_000).map(|_| sample_rayleigh(sigma, &mut rng)).collect();
        let d = common::ks_statistic(samples, rayleigh_cdf(sigma));
        assert!(d < 0.005, "sigma {sigma}: KS {d}");
    }
}

#[test]
fn rayleigh_mean_matches_moment() {
    let sigma = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 1_000_000;
    let mean = (0..n).map(|_| sample_rayleigh(sigma, &mut rng)).sum::<f64>() / n as f64;
    let expected = sigma * (std::f64::consts::PI / 2.0).sqrt();
    assert!((expected - 0.06267).abs() < 1e-5);
    assert!((mean - expected).abs() < 0.005 * expected, "{mean}");
}

#[test]
fn zero_jitter_collects_a0_exactly() {
    let p = params(0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for d in [0.3, 1.0, 2.0, 7.5] {
        let geo = beam_geometry(&p, d).unwrap();
        let s = sample_misalignment(&p, &geo, &mut rng);
        assert_eq!(s.rho, 0.0);
        assert_eq!(s.h_phi, geo.a0);
        assert_eq!(misalignment_gain(&geo, 0.0), geo.a0);
    }
}

#[test]
fn beam_radius_at_five_meters() {
    let geo = beam_geometry(&params(0.0), 5.0).unwrap();
    let expected = 5.0 * (0.45f64.to_radians()).tan();
    assert!((geo.beam_radius - expected).abs() < 1e-15);
    assert!((geo.beam_radius - 0.0393).abs() < 5e-5);
}

#[test]
fn wide_aperture_collects_everything() {
    let mut p = params(0.0);
    p.rx_aperture_radius = 10.0;
    let geo = beam_geometry(&p, 5.0).unwrap();
    assert_eq!(geo.a0, 1.0);
    assert!(geo.r_eq > 0.0);
}

#[test]
fn collection_fraction_falls_with_distance() {
    let p = params(0.0);
    let a0: Vec<f64> = (1..=40)
        .map(|i| beam_geometry(&p, 2.0 + 0.25 * i as f64).unwrap().a0)
        .collect();
    assert!(a0.windows(2).all(|w| w[1] < w[0]));
    assert!(a0.iter().all(|&a| a > 0.0 && a <= 1.0));
}

#[test]
fn table_knots_are_reproduced() {
    let table = AbsorptionTable::standard_atmosphere();
    let model = AbsorptionModel::Table(Arc::new(table.clone()));
    for (f, k) in table.entries() {
        assert_eq!(molecular_absorption(&model, f).unwrap(), k);
    }
    let mid = molecular_absorption(&model, 300.25e9).unwrap();
    assert!((mid - common::absorption(&model, 300.25e9)).abs() <= 1e-18);
    assert!(matches!(
        molecular_absorption(&model, 274e9),
        Err(ChannelError::OutOfRange { .. })
    ));
    assert!(matches!(
        molecular_absorption(&model, 326e9),
        Err(ChannelError::OutOfRange { .. })
    ));
}

#[test]
fn table_file_format() {
    let table: AbsorptionTable = "# f k\n1e11 0.1\n2e11 0.3\n\n3e11 0.2 # peak passed\n"
        .parse()
        .unwrap();
    assert_eq!(table.coverage(), (1e11, 3e11));
    assert!((table.lookup(1.5e11).unwrap() - 0.2).abs() < 1e-15);
    assert!("2e11 0.1\n1e11 0.2\n".parse::<AbsorptionTable>().is_err());
    assert!("1e11 -0.1\n2e11 0.2\n".parse::<AbsorptionTable>().is_err());
    assert!("1e11\n".parse::<AbsorptionTable>().is_err());
}

#[test]
fn path_gain_is_deterministic_and_matches_closed_form() {
    let mut p = params(0.0);
    p.absorption = AbsorptionModel::Constant(0.01);
    let h = path_gain(&p, 300e9, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(h.to_bits(), path_gain(&p, 300e9, 1.0, 1.0, 1.0).unwrap().to_bits());
    let expected = common::C / (4.0 * std::f64::consts::PI * 300e9) * (-0.005f64).exp();
    assert!((h - expected).abs() <= 1e-15 * expected);
    assert!(path_gain(&p, 300e9, 0.0, 1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn misalignment_stays_below_a0(seed in any::<u64>(), sigma in 0.0f64..0.5, d in 0.2f64..10.0) {
        let p = params(sigma);
        let geo = beam_geometry(&p, d).unwrap();
        let s = sample_misalignment(&p, &geo, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(s.rho >= 0.0);
        prop_assert!(s.h_phi >= 0.0 && s.h_phi <= geo.a0);
        prop_assert_eq!(s.h_phi, misalignment_gain(&geo, s.rho));
    }

    /// Rescaling every length by `s` (and frequency by `1/s`, so wavelengths
    /// follow) leaves all dimensionless gains unchanged.
    #[test]
    fn gains_are_scale_consistent(
        d in 0.2f64..10.0,
        a in 0.001f64..0.1,
        k in 0.0f64..0.05,
        rho_frac in 0.0f64..2.0,
        s in prop::sample::select(vec![1e-3, 1e3, 100.0]),
    ) {
        let mut m = params(0.0);
        m.rx_aperture_radius = a;
        m.absorption = AbsorptionModel::Constant(k);
        let mut scaled = m.clone();
        scaled.rx_aperture_radius = a * s;
        scaled.absorption = AbsorptionModel::Constant(k / s);

        let g1 = beam_geometry(&m, d).unwrap();
        let g2 = beam_geometry(&scaled, d * s).unwrap();
        let close = |x: f64, y: f64| x == y || (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300);
        prop_assert!(close(g1.a0, g2.a0));
        prop_assert!(close(g1.beam_radius * s, g2.beam_radius));
        prop_assert!(close(g1.r_eq * s, g2.r_eq));
        let rho = rho_frac * g1.beam_radius;
        prop_assert!(close(misalignment_gain(&g1, rho), misalignment_gain(&g2, rho * s)));

        let h1 = path_gain(&m, 300e9, d, 2.0, 3.0).unwrap();
        let h2 = path_gain(&scaled, 300e9 / s, d * s, 2.0, 3.0).unwrap();
        prop_assert!(close(h1, h2));
    }
}
