//! Scalar abstraction shared by the analytic parts of the crate.
//!
//! Everything that evaluates exponential sums, polynomials or integrals is
//! written against [`Real`], so the same code runs in `f32` (cheap scans) and
//! `f64` (the default everywhere else). Integer-valued quantities such as
//! Ramanujan sums, digit counts and Farey endpoints never go through this
//! trait; they stay exact.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Debug + Display + Default + Sum
{
    /// Converts an `f64` literal, panicking only on non-representable input
    /// (never the case for `f32`/`f64`).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_u64_lossy(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac<T: Real>(x: T) -> T {
    let f = x - x.floor();
    // x slightly below an integer can round up to exactly 1
    if f >= T::one() {
        T::zero()
    } else {
        f
    }
}

/// Distance to the nearest integer, `‖x‖`.
#[inline]
pub fn dist_to_int<T: Real>(x: T) -> T {
    let f = frac(x);
    f.min(T::one() - f)
}

/// The additive character `e(x) = exp(2πix)`.
///
/// The argument is reduced mod 1 before the trig calls; every exponential in
/// the crate goes through here.
#[inline]
pub fn e<T: Real>(x: T) -> Complex<T> {
    let theta = T::TAU() * frac(x);
    Complex::new(theta.cos(), theta.sin())
}

/// `frac(n·x)` with the rounding error of the product recovered by a fused
/// multiply-add, so the phase keeps the precision of `x` itself.
#[inline]
pub fn frac_mul<T: Real>(n: u64, x: T) -> T {
    let m = T::from_u64_lossy(n);
    // x − round(x) is exact, unlike frac(x) for small negative x
    let a = x - x.round();
    let p = m * a;
    let err = m.mul_add(a, -p);
    frac(frac(p) + err)
}

/// `e(n·x)` via [`frac_mul`].
#[inline]
pub fn e_mul<T: Real>(n: u64, x: T) -> Complex<T> {
    e(frac_mul(n, x))
}

/// `e(num/den)` computed from the exact residue `num mod den`.
#[inline]
pub fn e_ratio<T: Real>(num: i64, den: u64) -> Complex<T> {
    let r = num.rem_euclid(den as i64) as u64;
    e(T::from_u64_lossy(r) / T::from_u64_lossy(den))
}

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise (cascade) summation of a slice of complex values.
pub fn pairwise_sum_c<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum_c(&xs[..mid]) + pairwise_sum_c(&xs[mid..])
}

/// Pairwise summation of real values.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(T::zero(), |a, &b| a + b);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Weighted exponential sum `Σ w(n) e(nα)` over `(n, w)` pairs, pairwise
/// accumulated. Terms with zero weight are skipped.
pub fn exp_sum<T, I>(terms: I, alpha: T) -> Complex<T>
where
    T: Real,
    I: IntoIterator<Item = (u64, T)>,
{
    let buf: Vec<Complex<T>> = terms
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(n, w)| e_mul(n, alpha) * w)
        .collect();
    pairwise_sum_c(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_at_quarter_turns() {
        let z: Complex<f64> = e(0.25);
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        let z: Complex<f64> = e(-0.5);
        assert!((z.re + 1.0).abs() < 1e-15);
        let z: Complex<f32> = e(3.0f32);
        assert!((z.re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn distance_to_nearest_integer() {
        assert_eq!(dist_to_int(2.25f64), 0.25);
        assert_eq!(dist_to_int(-0.75f64), 0.25);
        assert_eq!(dist_to_int(3.0f64), 0.0);
    }

    #[test]
    fn e_ratio_reduces_negative_numerators() {
        let a: Complex<f64> = e_ratio(-1, 4);
        let b: Complex<f64> = e_ratio(3, 4);
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn frac_mul_keeps_phase_precision() {
        // 2^-30 · (2^40 + 3) = 1024 + 3·2^-30 exactly
        let x = 2f64.powi(-30);
        let f = frac_mul((1u64 << 40) + 3, x);
        assert_eq!(f, 3.0 * x);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }
}
