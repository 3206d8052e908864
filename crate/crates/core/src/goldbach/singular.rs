use std::sync::OnceLock;

use serde::Serialize;

use crate::arith::{factorize, sieve_primes};
use crate::error::{ensure, Result};
use crate::quad::{integrate, QuadConfig};

/// Primes used in the defining product of the twin-prime constant.
pub const C2_PRIME_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwinPrimeConstant {
    /// `Π_{2 < p ≤ P} (1 − 1/(p−1)²)` times the estimated tail factor.
    pub value: f64,
    /// Product over `p ≤ P` only.
    pub partial: f64,
    /// Estimate of `Σ_{p > P} 1/(p−1)²` used for the tail factor.
    pub tail: f64,
}

/// `C₂ = Π_{p > 2} (1 − 1/(p−1)²)`.
///
/// The tail over `p > P` is estimated by `∫_P^∞ dt/(t² log t) = E₁(log P)`.
pub fn twin_prime_constant() -> TwinPrimeConstant {
    static C2: OnceLock<TwinPrimeConstant> = OnceLock::new();
    *C2.get_or_init(|| {
        let primes = sieve_primes(C2_PRIME_LIMIT).expect("C₂ prime limit within sieve cap");
        let log_partial: f64 = primes
            .iter()
            .skip(1)
            .map(|p| {
                let t = 1.0 / ((p - 1) as f64).powi(2);
                (-t).ln_1p()
            })
            .sum();
        let a = (C2_PRIME_LIMIT as f64).ln();
        let cfg = QuadConfig { abs_tol: 1e-20, rel_tol: 1e-12, max_segments: 2000 };
        let tail = integrate(|u: f64| (-u).exp() / u, a, a + 60.0, &cfg).expect("smooth integrand").value;
        TwinPrimeConstant { value: (log_partial - tail).exp(), partial: log_partial.exp(), tail }
    })
}

/// `2C₂ Π_{p | n, p odd} (p−1)/(p−2)` for `2n`.
pub fn singular_closed(two_n: u64) -> Result<f64> {
    ensure!(two_n.is_multiple_of(2), Domain, "2n = {two_n} is odd");
    ensure!(two_n >= 2, Domain, "2n must be ≥ 2, got {two_n}");
    let mut v = 2.0 * twin_prime_constant().value;
    for (p, _) in factorize(two_n / 2) {
        if p > 2 {
            v *= (p - 1) as f64 / (p - 2) as f64;
        }
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularTruncated {
    pub qmax: u64,
    /// `Σ_{q ≤ Qmax} μ(q)²/φ(q)² c_q(−m)`
    pub value: f64,
    /// Estimate of `Σ_{q > Qmax} μ(q)² (m, q)/φ(q)²`: twice the block over
    /// `(Qmax, 2Qmax]`, matching a `1/Qmax` decay.
    pub tail_estimate: f64,
}

/// Truncations of `Σ_q μ(q)²/φ(q)² c_q(m)` for a fixed `Qmax`.
///
/// For squarefree `q` the summand is multiplicative, with local factor
/// `1/(p−1)` when `p | m` and `−1/(p−1)²` otherwise, so the sum runs as a
/// depth-first walk over squarefree `q`.
#[derive(Debug, Clone)]
pub struct SingularSeries {
    qmax: u64,
    primes: Vec<u64>,
}

impl SingularSeries {
    pub fn new(qmax: u64) -> Result<Self> {
        ensure!(qmax >= 1, Precondition, "Qmax must be ≥ 1");
        ensure!(qmax <= 50_000_000, Resource, "Qmax = {qmax} exceeds 5·10⁷");
        let primes = sieve_primes(2 * qmax)?.primes().to_vec();
        Ok(SingularSeries { qmax, primes })
    }

    pub fn qmax(&self) -> u64 {
        self.qmax
    }

    /// The truncation at argument `m` (any sign; `c_q(−m) = c_q(m)`).
    pub fn truncated(&self, m: i64) -> SingularTruncated {
        let m = m.unsigned_abs();
        let limit = 2 * self.qmax;
        let mut head = 0.0;
        let mut tail = 0.0;
        // (q, product of local factors, product of crude local factors, next prime index)
        let mut stack = vec![(1u64, 1.0f64, 1.0f64, 0usize)];
        while let Some((q, v, crude, start)) = stack.pop() {
            if q <= self.qmax {
                head += v;
            } else {
                tail += crude;
            }
            for (i, &p) in self.primes.iter().enumerate().skip(start) {
                if q * p > limit {
                    break;
                }
                let phi2 = ((p - 1) * (p - 1)) as f64;
                let divides = m.is_multiple_of(p);
                let local = if divides { (p - 1) as f64 / phi2 } else { -1.0 / phi2 };
                let crude_local = if divides { p as f64 / phi2 } else { 1.0 / phi2 };
                stack.push((q * p, v * local, crude * crude_local, i + 1));
            }
        }
        SingularTruncated { qmax: self.qmax, value: head, tail_estimate: 2.0 * tail }
    }
}

/// `Σ_{q ≤ Qmax} μ(q)²/φ(q)² c_q(−2n)` for a single argument.
pub fn singular_truncated(two_n: i64, qmax: u64) -> Result<f64> {
    Ok(SingularSeries::new(qmax)?.truncated(two_n).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{mobius, ramanujan_sum, totient};

    #[test]
    fn twin_prime_constant_value() {
        let c = twin_prime_constant();
        assert!((c.value - 0.660_161_815_846_869_6).abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn closed_form_named() {
        let c2 = twin_prime_constant().value;
        assert!((singular_closed(4).unwrap() - 2.0 * c2).abs() < 1e-15);
        assert!((singular_closed(10).unwrap() - 2.0 * c2 * 4.0 / 3.0).abs() < 1e-14);
        assert!((singular_closed(6).unwrap() - 2.0 * c2 * 2.0).abs() < 1e-14);
        assert_eq!(singular_closed(7).unwrap_err().kind(), "domain");
    }

    #[test]
    fn walk_matches_direct_sum() {
        let s = SingularSeries::new(300).unwrap();
        for m in [1i64, 2, 10, 30, 97, 210, -12] {
            let direct: f64 = (1..=300u64)
                .map(|q| {
                    let mu = mobius(q) as f64;
                    mu * mu * ramanujan_sum(q, -m) as f64 / (totient(q) as f64).powi(2)
                })
                .sum();
            assert!((s.truncated(m).value - direct).abs() < 1e-12, "m = {m}");
        }
        assert_eq!(SingularSeries::new(1).unwrap().truncated(10).value, 1.0);
    }
}
