use gbseed_core::digitset::{
    ap_discrepancy, exp_sum_by_digits, exp_sum_by_members, fourier_f, fourier_f_by_members, DigitSystem,
    RestrictedSet,
};
use proptest::prelude::*;

fn brute_count(sys: &DigitSystem, lo: u64, hi: u64) -> u64 {
    (lo..=hi).filter(|&n| sys.admits(n)).count() as u64
}

#[test]
fn full_blocks_have_power_counts() {
    for g in [3u64, 10, 12] {
        let sys = DigitSystem::new(g, 2).unwrap();
        for k in 1..=5u32 {
            let set = RestrictedSet::new(sys, 1, g.pow(k) - 1).unwrap();
            // 0 is admissible but lies outside [1, gᵏ − 1]
            assert_eq!(set.count() + 1, (g - 1).pow(k), "g = {g}, k = {k}");
        }
    }
}

#[test]
fn ap_counts_sum_to_total() {
    let sys = DigitSystem::new(10, 7).unwrap();
    let set = RestrictedSet::new(sys, 31, 98_765).unwrap();
    for q in 1..=100 {
        let counts = set.residue_counts(q).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), set.count(), "q = {q}");
        for a in [0, q / 2, q - 1] {
            let brute = set.members().unwrap().filter(|n| n % q == a).count() as u64;
            assert_eq!(counts[a as usize], brute, "q = {q}, a = {a}");
        }
    }
}

#[test]
fn discrepancy_rows_are_consistent() {
    let sys = DigitSystem::new(10, 7).unwrap();
    let r = ap_discrepancy(sys, 10_000, 20).unwrap();
    assert_eq!(r.total, 9u64.pow(4));
    assert_eq!(r.rows.len(), 20);
    assert_eq!(r.rows[0].max_a_discrepancy, 0.0);
}

#[test]
fn rejects_degenerate_digits() {
    assert!(DigitSystem::new(10, 1).is_err());
    assert!(DigitSystem::new(10, 10).is_err());
    assert!(DigitSystem::new(1, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn count_matches_enumeration(g in prop::sample::select(vec![3u64, 10, 12]), b in 2u64..12, lo in 1u64..100_000, w in 0u64..5_000) {
        let b = b % g;
        prop_assume!(b >= 2);
        let sys = DigitSystem::new(g, b).unwrap();
        let hi = (lo + w).min(100_000);
        let set = RestrictedSet::new(sys, lo, hi).unwrap();
        prop_assert_eq!(set.count(), brute_count(&sys, lo, hi));
        prop_assert_eq!(set.members().unwrap().count() as u64, set.count());
    }

    #[test]
    fn fourier_is_even_and_periodic(alpha in 0.0f64..1.0, k in -3i64..3) {
        let set = RestrictedSet::new(DigitSystem::new(10, 7).unwrap(), 1, 99_999).unwrap();
        let f = fourier_f(&set, alpha).unwrap();
        prop_assert!((fourier_f(&set, -alpha).unwrap() - f).abs() < 1e-9);
        prop_assert!((fourier_f(&set, alpha + k as f64).unwrap() - f).abs() < 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn digit_route_matches_members(lo in 1u64..50_000, w in 0u64..3_000, alpha in 0.0f64..1.0) {
        let set = RestrictedSet::new(DigitSystem::new(10, 7).unwrap(), lo, lo + w).unwrap();
        let a = exp_sum_by_digits(&set, alpha);
        let b = exp_sum_by_members(&set, alpha).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (set.count() as f64).max(1.0));
        prop_assume!(set.count() > 0);
        let fa = fourier_f(&set, alpha).unwrap();
        let fb = fourier_f_by_members(&set, alpha).unwrap();
        prop_assert!((fa - fb).abs() < 1e-9);
    }
}
