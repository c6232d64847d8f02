use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rmt_core::common::*;
use rmt_core::exact_density::semicircle;
use rmt_core::sampling::gaussian_spectra;
use rmt_core::special::normal_cdf;
use std::f64::consts::{PI, SQRT_2};

#[test]
fn normal_histogram_matches_pdf() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let h = build_histogram(&xs, &HistogramSpec::new(-5.0, 5.0, 100, true)).unwrap();
    let d = sup_distance(&h, |x| (-0.5 * x * x).exp() / (2.0 * PI).sqrt());
    assert!(d <= 0.01, "{d}");
    assert!((h.integral() - 1.0).abs() < 0.02);
    let width = 0.1;
    let mass: f64 = h.ys.iter().map(|y| y * width).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn trapezoid_examples() {
    let f = GridFunction::from_fn(linspace(0.0, 1.0, 1001), |x| x).unwrap();
    assert!((trapezoid_integral(&f, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-10);
    let sc = GridFunction::from_fn(chebyshev_grid(-SQRT_2, SQRT_2, 4001), semicircle).unwrap();
    assert!((trapezoid_integral(&sc, -SQRT_2, SQRT_2).unwrap() - 1.0).abs() < 1e-6);
    let m2 = GridFunction::from_fn(chebyshev_grid(-SQRT_2, SQRT_2, 4001), |x| x * x * semicircle(x)).unwrap();
    assert!((m2.integral() - 0.5).abs() < 1e-6);
    assert!(trapezoid_integral(&f, 0.5, 0.5).is_err());
}

#[test]
fn trapezoid_is_second_order() {
    let err = |n: usize| {
        let f = GridFunction::from_fn(linspace(0.0, 1.0, n), |x| x.exp()).unwrap();
        (f.integral() - (1f64.exp() - 1.0)).abs()
    };
    let ratio = err(101) / err(201);
    assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
}

#[test]
fn ks_self_and_shifted() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xs: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
    assert!(ks_unsorted(xs, normal_cdf).unwrap() <= 0.01);
    let u: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
    let shift = 0.1;
    let d = ks_unsorted(u, |x| (x - shift).clamp(0.0, 1.0)).unwrap();
    assert!((d - shift).abs() < 0.01, "{d}");
}

#[test]
fn rescaled_gue_edges() {
    let spectra = gaussian_spectra(2, 8, 2000, RngSeed(5)).unwrap();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &spectra {
        let r = rescale_spectrum(s);
        assert!(r.rescaled);
        lo = lo.min(r.values[0]);
        hi = hi.max(r.values[7]);
    }
    // aggregate extremes leak past √2 at N = 8 but stay near it
    assert!(lo > -SQRT_2 - 0.6 && hi < SQRT_2 + 0.6, "{lo} {hi}");
    let all: Vec<f64> = spectra.iter().flat_map(|s| rescale_spectrum(s).values).collect();
    let inside = all.iter().filter(|x| x.abs() <= SQRT_2 + 0.2).count() as f64 / all.len() as f64;
    assert!(inside > 0.99, "{inside}");
}

#[test]
fn semicircle_cdf_by_quadrature() {
    use rmt_core::exact_density::semicircle_cdf;
    for x in [-1.0, 0.0, 0.4, 1.3] {
        let g = GridFunction::from_fn(chebyshev_grid(-SQRT_2, x, 2001), semicircle).unwrap();
        assert!((g.integral() - semicircle_cdf(x)).abs() < 1e-6);
    }
}

proptest! {
    #[test]
    fn normalized_histogram_has_unit_mass(xs in prop::collection::vec(-3.0f64..3.0, 1..400), bins in 1usize..80) {
        let h = build_histogram(&xs, &HistogramSpec::new(-3.0, 3.0, bins, true)).unwrap();
        let w = 6.0 / bins as f64;
        let mass: f64 = h.ys.iter().map(|y| y * w).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raw_histogram_counts_in_range(xs in prop::collection::vec(-5.0f64..5.0, 1..400)) {
        let inside = xs.iter().filter(|x| (-2.0..=2.0).contains(*x)).count();
        match build_histogram(&xs, &HistogramSpec::new(-2.0, 2.0, 16, false)) {
            Ok(h) => prop_assert_eq!(h.ys.iter().sum::<f64>() as usize, inside),
            Err(_) => prop_assert_eq!(inside, 0),
        }
    }

    #[test]
    fn rescale_preserves_order_and_signs(mut v in prop::collection::vec(-10.0f64..10.0, 1..30), beta in prop::sample::select(vec![1u8, 2, 4])) {
        v.sort_by(f64::total_cmp);
        let s = Spectrum::new(v.clone(), beta).unwrap();
        let r = rescale_spectrum(&s);
        let f = (beta as f64 * v.len() as f64).sqrt();
        for (a, b) in v.iter().zip(&r.values) {
            prop_assert_eq!(a.signum(), b.signum());
            prop_assert!((b * f - a).abs() <= 1e-12 * a.abs());
        }
        prop_assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn density_constructor_enforces_mass(scale in 0.5f64..1.5) {
        let xs = linspace(0.0, 1.0, 101);
        let ys = vec![scale; 101];
        let ok = GridFunction::density(xs, ys, 1e-6).is_ok();
        prop_assert_eq!(ok, (scale - 1.0).abs() <= 1e-6);
    }
}
