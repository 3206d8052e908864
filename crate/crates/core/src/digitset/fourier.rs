//! The normalized transform `F(α) = |Σ_{n ∈ set} e(nα)| / |set|` and its L¹
//! norm over the circle.
//!
//! Besides plain enumeration, the sum factorizes along the digit walk: each
//! tight-prefix branch contributes `e(prefix·α)` times a product of the
//! one-digit sums `Σ_{c ≠ b} e(c gʲ α)` over the free positions below.

use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use super::RestrictedSet;
use crate::error::{ensure, Result};
use crate::expsum::spectrum;
use crate::scalar::{e_mul, pairwise_sum, pairwise_sum_c, Real};

/// Σ_{n ∈ set} e(nα) by enumeration.
pub fn exp_sum_by_members<T: Real>(set: &RestrictedSet, alpha: T) -> Result<Complex<T>> {
    let terms: Vec<Complex<T>> = set.members()?.map(|n| e_mul(n, alpha)).collect();
    Ok(pairwise_sum_c(&terms))
}

/// Σ_{n ∈ [0, upper], admissible} e(nα) via the digit factorization.
fn digit_sum_upto<T: Real>(set: &RestrictedSet, upper: u64, alpha: T) -> Complex<T> {
    let sys = set.system();
    let g = sys.base();
    let b = sys.forbidden();
    let ds = sys.digits(upper);
    let len = ds.len();
    // block[k] = Π_{j<k} Σ_{c≠b} e(c gʲ α)
    let mut block = vec![Complex::new(T::one(), T::zero()); len + 1];
    let mut gj: u128 = 1;
    for k in 0..len {
        let terms: Vec<Complex<T>> = (0..g)
            .filter(|&c| c != b)
            .map(|c| e_mul_wide(c as u128 * gj, alpha))
            .collect();
        block[k + 1] = block[k] * pairwise_sum_c(&terms);
        gj *= g as u128;
    }
    let mut pieces = Vec::new();
    let mut prefix: u128 = 0;
    let mut scale: u128 = (g as u128).pow(len as u32 - 1);
    for (pos, &d) in ds.iter().enumerate().rev() {
        for c in 0..d {
            if c == b {
                continue;
            }
            let start = (prefix * g as u128 + c as u128) * scale;
            pieces.push(e_mul_wide(start, alpha) * block[pos]);
        }
        if d == b {
            return pairwise_sum_c(&pieces);
        }
        prefix = prefix * g as u128 + d as u128;
        scale /= g as u128;
    }
    pieces.push(e_mul_wide(prefix, alpha));
    pairwise_sum_c(&pieces)
}

fn e_mul_wide<T: Real>(m: u128, alpha: T) -> Complex<T> {
    // split at 2^32 so each piece is exact in the FMA path
    let hi = (m >> 32) as u64;
    let lo = (m & 0xffff_ffff) as u64;
    if hi == 0 {
        return e_mul(lo, alpha);
    }
    let shifted = crate::scalar::frac_mul(1u64 << 32, alpha);
    e_mul(hi, shifted) * e_mul(lo, alpha)
}

/// Σ_{n ∈ set} e(nα) via the digit factorization; no enumeration.
pub fn exp_sum_by_digits<T: Real>(set: &RestrictedSet, alpha: T) -> Complex<T> {
    digit_sum_upto(set, set.hi(), alpha) - digit_sum_upto(set, set.lo() - 1, alpha)
}

fn nonempty(set: &RestrictedSet) -> Result<u64> {
    let c = set.count();
    ensure!(c >= 1, Domain, "transform of an empty set");
    Ok(c)
}

/// F(α), evaluated through the digit factorization.
pub fn fourier_f<T: Real>(set: &RestrictedSet, alpha: T) -> Result<T> {
    let c = nonempty(set)?;
    Ok((exp_sum_by_digits(set, alpha).norm() / T::from_u64_lossy(c)).min(T::one()))
}

/// F(α) by enumeration of members.
pub fn fourier_f_by_members<T: Real>(set: &RestrictedSet, alpha: T) -> Result<T> {
    let c = nonempty(set)?;
    Ok((exp_sum_by_members(set, alpha)?.norm() / T::from_u64_lossy(c)).min(T::one()))
}

/// `|set|^{−1 + log(log g + 1)/log(g − 1)}`.
pub fn l1_comparator(set: &RestrictedSet) -> f64 {
    let g = set.system().base() as f64;
    let c = set.count() as f64;
    c.powf(-1.0 + (g.ln() + 1.0).ln() / (g - 1.0).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1Estimate {
    pub grid_n: usize,
    pub count: u64,
    /// (1/N) Σ_j F(j/N)
    pub estimate: f64,
    /// L/(2N) with L = 2π·hi the Lipschitz bound of F
    pub error_bound: f64,
    pub comparator: f64,
    pub ratio: f64,
}

/// Riemann-sum estimate of ∫₀¹ F(α) dα on the grid `{j/N}`.
///
/// The grid values come from one FFT of the set's indicator.
pub fn l1_estimate(set: &RestrictedSet, grid_n: usize) -> Result<L1Estimate> {
    let count = nonempty(set)?;
    ensure!(
        grid_n as u128 >= 4 * (set.hi() as u128 + 1),
        Precondition,
        "grid of {grid_n} points is coarser than 4·(hi + 1) = {}",
        4 * (set.hi() as u128 + 1)
    );
    let spec = spectrum::<f64, _>(set.members()?.map(|n| (n, 1.0)), grid_n)?;
    let inv = 1.0 / count as f64;
    let vals: Vec<f64> = spec.values().iter().map(|z| (z.norm() * inv).min(1.0)).collect();
    let estimate = pairwise_sum(&vals) / grid_n as f64;
    let lipschitz = std::f64::consts::TAU * set.hi() as f64;
    let error_bound = lipschitz / (2.0 * grid_n as f64);
    let comparator = l1_comparator(set);
    Ok(L1Estimate { grid_n, count, estimate, error_bound, comparator, ratio: estimate / comparator })
}

/// `(α, F(α))` on `points` equally spaced α in `[0, 1)`.
pub fn fourier_grid(set: &RestrictedSet, points: usize) -> Result<Vec<(f64, f64)>> {
    ensure!(points >= 1, Precondition, "need at least one grid point");
    (0..points)
        .map(|j| {
            let a = j as f64 / points as f64;
            fourier_f(set, a).map(|f| (a, f))
        })
        .collect()
}

/// Writes `alpha,F` rows.
pub fn write_fourier_csv<W: Write>(rows: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "F"])?;
    for (a, f) in rows {
        w.write_record([a.to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digitset::DigitSystem;

    fn set(g: u64, b: u64, lo: u64, hi: u64) -> RestrictedSet {
        RestrictedSet::new(DigitSystem::new(g, b).unwrap(), lo, hi).unwrap()
    }

    #[test]
    fn normalization_and_parity() {
        let s = set(10, 7, 1, 100);
        assert!((fourier_f(&s, 0.0f64).unwrap() - 1.0).abs() < 1e-12);
        assert!((fourier_f(&s, 1.0f64).unwrap() - 1.0).abs() < 1e-12);
        assert!((fourier_f(&s, 0.5f64).unwrap() - 1.0 / 9.0).abs() < 1e-12);
        assert!((fourier_f_by_members(&s, 0.5f64).unwrap() - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn digit_route_matches_enumeration() {
        let s = set(10, 7, 37, 98_765);
        for &a in &[0.1234567f64, 0.5, 0.333333, 0.9, 1e-5] {
            let x = exp_sum_by_digits(&s, a);
            let y = exp_sum_by_members(&s, a).unwrap();
            assert!((x - y).norm() < 1e-9 * s.count() as f64, "α = {a}");
        }
    }

    #[test]
    fn singleton_has_unit_l1() {
        let s = set(10, 7, 5, 5);
        let r = l1_estimate(&s, 64).unwrap();
        assert!((r.estimate - 1.0).abs() < 1e-12);
        assert!(matches!(l1_estimate(&s, 8), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn grid_csv() {
        let s = set(10, 7, 1, 100);
        let rows = fourier_grid(&s, 4).unwrap();
        let mut buf = Vec::new();
        write_fourier_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("alpha,F\n0,1\n"));
    }
}
