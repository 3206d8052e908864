use serde::{Deserialize, Serialize};

use super::CircleParams;
use crate::error::{ensure, Result};
use crate::scalar::{dist_to_int, frac_mul};

/// Largest `⌊D(δ)⁻¹⌋` scanned by [`vinogradov_find`].
pub const SCAN_CAP: u64 = 10_000_000;
/// Largest `A` accepted by [`vinogradov_find`].
pub const A_CAP: u64 = 100_000_000;

/// Partial quotients of the fractional part of `alpha`, computed exactly
/// from its binary value.
pub fn continued_fraction(alpha: f64) -> Vec<u128> {
    let a = alpha - alpha.floor();
    if a == 0.0 || !a.is_finite() {
        return vec![0];
    }
    // a = num / 2^k exactly
    let mut k = 0u32;
    let mut x = a;
    while x.fract() != 0.0 {
        x *= 2.0;
        k += 1;
    }
    let (mut num, mut den) = (x as u128, 1u128 << k);
    let mut out = Vec::new();
    while den != 0 {
        out.push(num / den);
        (num, den) = (den, num % den);
    }
    out
}

/// Convergent denominators of `alpha` up to `qmax`, ascending.
fn convergent_denominators(alpha: f64, qmax: u64) -> Vec<u64> {
    let (mut k2, mut k1) = (0u128, 1u128);
    let mut out = vec![1];
    for a in continued_fraction(alpha).into_iter().skip(1) {
        let k = a * k1 + k2;
        if k > qmax as u128 {
            break;
        }
        out.push(k as u64);
        (k2, k1) = (k1, k);
    }
    out
}

/// The convergent denominator `q ≤ qmax` minimizing `‖qα‖`, with that
/// distance. Ties go to the smaller `q`.
pub fn rational_approx(alpha: f64, qmax: u64) -> Result<(u64, f64)> {
    ensure!(qmax >= 1, Precondition, "qmax must be ≥ 1");
    let mut best = (1, dist_to_int(alpha));
    for q in convergent_denominators(alpha, qmax) {
        let d = dist_to_int(frac_mul(q, alpha));
        if d < best.1 {
            best = (q, d);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Difference of two qualifying `a`, as in the pigeonhole argument.
    Difference,
    /// Exhaustive scan of `q ≤ D(δ)⁻¹`.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Vinogradov {
    /// `q ≤ D(δ)⁻¹` with `‖qα‖ ≤ q/(HδD(δ))`.
    Found { q: u64, dist: f64, via: WitnessSource },
    /// Fewer than `D(δ)A` values `a ∈ [A, 2A]` have `‖aα‖ ≤ (A/H)δ⁻¹`, or
    /// `D(δ)A < 1`.
    NotApplicable { qualifying: u64, required: f64 },
    /// The hypothesis holds but no `q ≤ D(δ)⁻¹` meets the conclusion.
    NoWitness { qualifying: u64 },
}

fn conclusion_holds(q: u64, alpha: f64, params: &CircleParams) -> Option<f64> {
    let d = dist_to_int(frac_mul(q, alpha));
    (d <= q as f64 * params.beta).then_some(d)
}

/// Constructive form of the large-values lemma: checks the hypothesis on
/// `[A, 2A]` and, when it holds, exhibits the denominator.
pub fn vinogradov_find(alpha: f64, a: u64, params: &CircleParams) -> Result<Vinogradov> {
    ensure!(a >= 1, Precondition, "A must be ≥ 1");
    ensure!(a <= A_CAP, Resource, "A = {a} exceeds {A_CAP}");
    let threshold = a as f64 / (params.h as f64 * params.delta);
    let hits: Vec<u64> = (a..=2 * a).filter(|&n| dist_to_int(frac_mul(n, alpha)) <= threshold).collect();
    let required = params.d_delta * a as f64;
    let qualifying = hits.len() as u64;
    if required < 1.0 || (qualifying as f64) < required {
        return Ok(Vinogradov::NotApplicable { qualifying, required });
    }
    let qmax_f = 1.0 / params.d_delta;
    ensure!(qmax_f <= SCAN_CAP as f64, Resource, "D(δ)⁻¹ = {qmax_f:.3e} exceeds the scan cap {SCAN_CAP}");
    let qmax = qmax_f.floor() as u64;
    let mut diffs: Vec<u64> = hits.windows(2).map(|w| w[1] - w[0]).filter(|&d| d <= qmax).collect();
    diffs.sort_unstable();
    diffs.dedup();
    for q in diffs {
        if let Some(dist) = conclusion_holds(q, alpha, params) {
            return Ok(Vinogradov::Found { q, dist, via: WitnessSource::Difference });
        }
    }
    for q in 1..=qmax {
        if let Some(dist) = conclusion_holds(q, alpha, params) {
            return Ok(Vinogradov::Found { q, dist, via: WitnessSource::Scan });
        }
    }
    Ok(Vinogradov::NoWitness { qualifying })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(continued_fraction(0.5), vec![0, 2]);
        assert_eq!(continued_fraction(0.0), vec![0]);
        assert_eq!(&continued_fraction(std::f64::consts::PI - 3.0)[..4], &[0, 7, 15, 1]);
    }

    #[test]
    fn named_approximations() {
        assert_eq!(rational_approx(0.5, 10).unwrap(), (2, 0.0));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let (q, d) = rational_approx(phi, 10).unwrap();
        assert_eq!(q, 8);
        assert!((d - 0.0557).abs() < 1e-4);
        let (q, d) = rational_approx(std::f64::consts::PI - 3.0, 10).unwrap();
        assert_eq!(q, 7);
        assert!((d - 0.0089).abs() < 1e-4);
    }

    #[test]
    fn finder_named_cases() {
        let p = CircleParams::with_log_exponent(1_000_000, 10_000, 0.1, 1.0).unwrap();
        match vinogradov_find(0.0, 100, &p).unwrap() {
            Vinogradov::Found { q, dist, .. } => assert_eq!((q, dist), (1, 0.0)),
            other => panic!("{other:?}"),
        }
        match vinogradov_find(1.0 / 3.0 + 1e-12, 100, &p).unwrap() {
            Vinogradov::Found { q, dist, .. } => {
                assert_eq!(q, 3);
                assert!(dist < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        let v = vinogradov_find(std::f64::consts::SQRT_2 - 1.0, 3, &p).unwrap();
        assert!(matches!(v, Vinogradov::NotApplicable { .. }), "{v:?}");
    }
}
