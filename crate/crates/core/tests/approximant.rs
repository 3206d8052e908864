use gbseed_core::approximant::{
    d4sharp_point, d4sharp_window, mainterm_by_quadrature, mainterm_polynomial, pm_poly, prop33_compare,
    ApproximantParams, Cubic,
};
use gbseed_core::arith::divisors;
use proptest::prelude::*;

/// `P_m(t)` straight from its defining sum over ordered triples.
fn pm_reference(m: u64, r4: f64, t: f64) -> f64 {
    let binom = [1.0, 4.0, 6.0, 4.0];
    let fact = [1.0, 1.0, 2.0, 6.0];
    let lr = r4.ln();
    let mut total = 0.0;
    for a in divisors(m) {
        for b in divisors(m / a) {
            let c = m / a / b;
            let t3 = [a as f64, b as f64, c as f64];
            for j in 0..=3 {
                let small = t3[..j].iter().all(|&n| n <= r4);
                let large = t3[j..].iter().all(|&n| n > r4 && n <= r4 * r4);
                if small && large {
                    let shift: f64 = t3[..j].iter().map(|n| n.ln()).sum::<f64>() + (4 - j) as f64 * lr;
                    let k = 3 - j;
                    total += binom[j] * (t - shift).powi(k as i32) / (fact[k] * lr.powi(k as i32));
                }
            }
        }
    }
    total
}

#[test]
fn table_matches_reference_formula() {
    let params = ApproximantParams::with_r4(100_000, 0.1, 10.0).unwrap();
    for m in 1..=10_000u64 {
        let p = params.pm(m).unwrap();
        let q = pm_poly(m, 10.0).unwrap();
        for t in [0.0, 5.0, 11.5, 13.8, 20.0] {
            let want = pm_reference(m, 10.0, t);
            let scale = want.abs().max(1.0);
            assert!((p.eval(t) - want).abs() < 1e-9 * scale, "m = {m}, t = {t}");
            assert!((q.eval(t) - want).abs() < 1e-9 * scale, "m = {m}, t = {t}");
        }
    }
}

#[test]
fn large_primes_get_weight_four() {
    let params = ApproximantParams::with_r4(2_000_000, 0.1, 10.0).unwrap();
    for p in [1_000_003u64, 1_000_033, 1_999_993] {
        assert!((d4sharp_point(p, &params).unwrap() - 4.0).abs() < 1e-12);
    }
}

#[test]
fn window_matches_pointwise() {
    let (x, h) = (100_000u64, 1_000u64);
    let params = ApproximantParams::with_r4(x, 0.1, 10.0).unwrap();
    let win = d4sharp_window(x, h, &params).unwrap();
    assert_eq!(win.len(), (h + 1) as usize);
    for (i, v) in win.iter().enumerate() {
        let p = d4sharp_point(x + i as u64, &params).unwrap();
        assert!((v - p).abs() < 1e-9 * p.abs().max(1.0), "n = {}", x + i as u64);
    }
}

#[test]
fn closed_form_main_term_matches_quadrature() {
    let params = ApproximantParams::with_r4(100_000, 0.1, 10.0).unwrap();
    for q in [1u64, 2, 3, 6, 10] {
        let poly = mainterm_polynomial(q, &params);
        let closed = poly.integral_log(1e5, 1.01e5);
        let quad = mainterm_by_quadrature(&poly, 1e5, 1.01e5).unwrap();
        assert!((closed - quad).abs() < 1e-6 * closed.abs().max(1.0), "q = {q}");
    }
}

#[test]
fn main_term_gap_is_small_at_zero_frequency() {
    let params = ApproximantParams::with_r4(100_000, 0.1, 10.0).unwrap();
    let r = prop33_compare(1, 1, 0.0, 100_000, 10_000, &params).unwrap();
    assert!(r.abs_gap <= 0.01 * r.direct.norm(), "{r:?}");
}

proptest! {
    #[test]
    fn cubic_integral_matches_derivative(c in prop::array::uniform4(-5.0f64..5.0), a in 1.0f64..1e4, w in 1.0f64..1e3) {
        let p = Cubic::new(c);
        let b = a + w;
        let quad = mainterm_by_quadrature(&p, a, b).unwrap();
        prop_assert!((p.integral_log(a, b) - quad).abs() < 1e-6 * quad.abs().max(1.0));
    }

    #[test]
    fn max_abs_bounds_samples(c in prop::array::uniform4(-5.0f64..5.0), t0 in 0.0f64..10.0, w in 0.0f64..10.0) {
        let p = Cubic::new(c);
        let m = p.max_abs_on(t0, t0 + w);
        for i in 0..=50 {
            let t = t0 + w * i as f64 / 50.0;
            prop_assert!(p.eval(t).abs() <= m * (1.0 + 1e-12) + 1e-12);
        }
    }
}
