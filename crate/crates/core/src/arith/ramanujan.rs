use num_complex::Complex64;

use super::functions::{gcd, mobius, totient};
use crate::scalar::{e_ratio, pairwise_sum_c};

/// Ramanujan's sum c_q(m) via `μ(q/(q,m)) φ(q) / φ(q/(q,m))`.
///
/// `m = 0` gives φ(q). Panics if `q == 0`.
pub fn ramanujan_sum(q: u64, m: i64) -> i64 {
    assert!(q >= 1, "Ramanujan sums need q ≥ 1");
    let g = gcd(q, m.unsigned_abs());
    let g = if m == 0 { q } else { g };
    let r = q / g;
    mobius(r) as i64 * (totient(q) / totient(r)) as i64
}

/// The defining sum `Σ_{a mod q, (a,q)=1} e(ma/q)`, evaluated term by term.
pub fn ramanujan_sum_by_units(q: u64, m: i64) -> Complex64 {
    assert!(q >= 1, "Ramanujan sums need q ≥ 1");
    let qi = q as i64;
    let terms: Vec<Complex64> = (1..=q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| e_ratio((m.rem_euclid(qi) as i128 * a as i128 % q as i128) as i64, q))
        .collect();
    pairwise_sum_c(&terms)
}
