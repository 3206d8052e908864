use gbseed_core::approximant::ApproximantParams;
use gbseed_core::arith::build_window;
use gbseed_core::expsum::{
    s4_eval, s_sum, s_sum_at, spectrum, spectrum_point, t_sum, t_sum_direct, Interval, IntervalSpec, S4Kind,
};
use proptest::prelude::*;

#[test]
fn s4_at_zero_is_the_window_sum() {
    let (x, h) = (100_000u64, 1_000u64);
    let w = build_window(x, h + 1).unwrap();
    let params = ApproximantParams::with_r4(x, 0.1, 10.0).unwrap();
    let direct: u64 = (x..=x + h).map(|n| w.d4(n) as u64).sum();
    let s = s4_eval(0.0f64, x, h, &w, &params, S4Kind::D4).unwrap();
    assert_eq!(s.re, direct as f64);
    assert_eq!(s.im, 0.0);
}

#[test]
fn s_sum_at_rational_matches_plain_evaluation() {
    let (x, h) = (50_000u64, 2_000u64);
    let w = build_window(1, x + h).unwrap();
    let spec = IntervalSpec::new(Interval::I1, x, h).unwrap();
    for (q, a, eta) in [(7u64, 3u64, 1e-5f64), (12, 5, -2e-4), (1, 1, 0.0)] {
        let alpha = a as f64 / q as f64 + eta;
        let exact = s_sum_at(&spec, q, a, eta, &w).unwrap();
        let plain = s_sum(&spec, alpha, &w).unwrap();
        assert!((exact - plain).norm() < 1e-8 * h as f64, "q = {q}");
    }
}

#[test]
fn spectrum_obeys_parseval() {
    let weights: Vec<(u64, f64)> = (0..300u64).map(|n| (n, ((n * 37) % 11) as f64 - 5.0)).collect();
    let n_grid = 512;
    let s = spectrum(weights.iter().copied(), n_grid).unwrap();
    let energy: f64 = weights.iter().map(|(_, w)| w * w).sum();
    let mean_sq: f64 = s.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / n_grid as f64;
    assert!((mean_sq - energy).abs() < 1e-9 * energy);
    for j in [0usize, 1, 17, 255, 511] {
        assert!((s.values()[j] - spectrum_point(&weights, j, n_grid)).norm() < 1e-9);
    }
}

proptest! {
    #[test]
    fn t_sum_closed_form_matches_direct(x in 1_000u64..1_000_000, h in 1u64..1_000, eta in -0.5f64..0.5, second in any::<bool>()) {
        prop_assume!(h <= x);
        let which = if second { Interval::I2 } else { Interval::I1 };
        let spec = IntervalSpec::new(which, x, h).unwrap();
        let a = t_sum(&spec, eta);
        let b = t_sum_direct(&spec, eta);
        prop_assert!((a - b).norm() < 1e-9 * h as f64, "{a} vs {b}");
    }

    #[test]
    fn t_sum_bounded_by_length(x in 1_000u64..1_000_000, h in 1u64..1_000, eta in -0.5f64..0.5) {
        prop_assume!(h <= x);
        let spec = IntervalSpec::new(Interval::I1, x, h).unwrap();
        prop_assert!(t_sum(&spec, eta).norm() <= h as f64 + 1e-9);
    }
}
