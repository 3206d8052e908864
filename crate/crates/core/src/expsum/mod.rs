//! Exponential sums of the circle method over the two intervals
//! `I₁ = (X − H, X]` and `I₂ = (0, H]`.

pub mod spectrum;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::approximant::{d4sharp_window, ApproximantParams};
use crate::arith::{gcd, mobius, totient, DirichletCharacter, SieveWindow};
use crate::error::{ensure, Error, Result};
use crate::scalar::{e, frac, frac_mul, pairwise_sum_c, Real};

pub use spectrum::{spectrum, spectrum_dense, spectrum_point, SpectrumGrid, SPECTRUM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    /// `(X − H, X]`
    I1,
    /// `(0, H]`
    I2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    which: Interval,
    x: u64,
    h: u64,
}

impl IntervalSpec {
    pub fn new(which: Interval, x: u64, h: u64) -> Result<Self> {
        ensure!(h >= 1, Precondition, "interval length H must be ≥ 1");
        ensure!(h <= x, Precondition, "H = {h} exceeds X = {x}");
        Ok(IntervalSpec { which, x, h })
    }

    pub fn which(&self) -> Interval {
        self.which
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    /// Inclusive integer bounds `(lo, hi)`.
    pub fn bounds(&self) -> (u64, u64) {
        match self.which {
            Interval::I1 => (self.x - self.h + 1, self.x),
            Interval::I2 => (1, self.h),
        }
    }
}

/// `sin(π·h·x)` with the product's rounding error recovered, so the result
/// stays accurate when `h·x` is large.
fn sin_pi_mul<T: Real>(h: u64, x: T) -> T {
    let m = T::from_u64_lossy(h);
    let p = m * x;
    let err = m.mul_add(x, -p);
    let k = p.round();
    let r = (p - k) + err;
    let s = (T::PI() * r).sin();
    if (k.to_f64().unwrap_or(0.0) % 2.0).abs() == 1.0 {
        -s
    } else {
        s
    }
}

/// `T_i(η) = Σ_{n ∈ I_i} e(nη)` in closed form.
pub fn t_sum<T: Real>(spec: &IntervalSpec, eta: T) -> Complex<T> {
    let (lo, _) = spec.bounds();
    let h = spec.h;
    let r = eta - eta.round();
    if r.abs() < T::lit(1e-15) {
        return Complex::new(T::from_u64_lossy(h), T::zero());
    }
    // centred form e(cη)·sin(πHη)/sin(πη), c = lo + (H − 1)/2
    let half = r * T::lit(0.5);
    let phase = e(frac_mul(2 * lo + h - 1, half));
    phase * (sin_pi_mul(h, r) / (T::PI() * r).sin())
}

/// `T_i(η)` by direct summation.
pub fn t_sum_direct<T: Real>(spec: &IntervalSpec, eta: T) -> Complex<T> {
    let (lo, hi) = spec.bounds();
    let terms: Vec<Complex<T>> = (lo..=hi).map(|n| e(frac_mul(n, eta))).collect();
    pairwise_sum_c(&terms)
}

/// `e(n·(a/q + η))` with the rational part reduced exactly.
#[inline]
fn e_shifted<T: Real>(n: u64, q: u64, a: u64, eta: T) -> Complex<T> {
    let r = ((n as u128 * a as u128) % q as u128) as u64;
    e(frac(T::from_u64_lossy(r) / T::from_u64_lossy(q) + frac_mul(n, eta)))
}

fn lambda_sum<T: Real, F>(spec: &IntervalSpec, window: &SieveWindow, mut phase: F) -> Result<Complex<T>>
where
    F: FnMut(u64) -> Option<Complex<T>>,
{
    let (lo, hi) = spec.bounds();
    window.require(lo, hi)?;
    let mut terms = Vec::new();
    for n in lo..=hi {
        let l = window.lambda(n);
        if l != 0.0 {
            if let Some(z) = phase(n) {
                terms.push(z * T::lit(l));
            }
        }
    }
    Ok(pairwise_sum_c(&terms))
}

/// `S_i(α) = Σ_{n ∈ I_i} Λ(n) e(nα)`.
pub fn s_sum<T: Real>(spec: &IntervalSpec, alpha: T, window: &SieveWindow) -> Result<Complex<T>> {
    lambda_sum(spec, window, |n| Some(e(frac_mul(n, alpha))))
}

/// `S_i(a/q + η)` with `a/q` kept exact.
pub fn s_sum_at<T: Real>(spec: &IntervalSpec, q: u64, a: u64, eta: T, window: &SieveWindow) -> Result<Complex<T>> {
    ensure!(q >= 1, Domain, "modulus must be ≥ 1");
    lambda_sum(spec, window, |n| Some(e_shifted(n, q, a, eta)))
}

/// `R_i(η, q, a) = S_i(a/q + η) − (μ(q)/φ(q)) T_i(η)`.
pub fn r_term<T: Real>(spec: &IntervalSpec, eta: T, q: u64, a: u64, window: &SieveWindow) -> Result<Complex<T>> {
    ensure!(q >= 1 && a >= 1 && a <= q, Domain, "need 1 ≤ a ≤ q, got a = {a}, q = {q}");
    ensure!(gcd(a, q) == 1, Domain, "gcd({a}, {q}) ≠ 1");
    let s = s_sum_at(spec, q, a, eta, window)?;
    let coef = T::lit(mobius(q) as f64 / totient(q) as f64);
    Ok(s - t_sum(spec, eta) * coef)
}

/// `W_i(χ, η) = Σ_{n ∈ I_i} Λ(n) χ(n) e(nη) − δ_χ T_i(η)`.
pub fn w_term<T: Real>(spec: &IntervalSpec, chi: &DirichletCharacter, eta: T, window: &SieveWindow) -> Result<Complex<T>> {
    let s = lambda_sum(spec, window, |n| {
        let c = chi.value(n as i64);
        if c.re == 0.0 && c.im == 0.0 {
            None
        } else {
            Some(Complex::new(T::lit(c.re), T::lit(c.im)) * e(frac_mul(n, eta)))
        }
    })?;
    Ok(if chi.is_principal() { s - t_sum(spec, eta) } else { s })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum S4Kind {
    D4,
    D4Sharp,
}

/// The weights of `S₄(α; H)` or `S₄♯(α; H)` on `[X, X + H]`, tabulated once
/// for repeated evaluation.
#[derive(Debug, Clone)]
pub struct S4Weights {
    x: u64,
    weights: Vec<f64>,
}

impl S4Weights {
    pub fn new(x: u64, h: u64, window: &SieveWindow, params: &ApproximantParams, kind: S4Kind) -> Result<Self> {
        let hi = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
        let weights = match kind {
            S4Kind::D4 => {
                window.require(x, hi)?;
                (x..=hi).map(|n| window.d4(n) as f64).collect()
            }
            S4Kind::D4Sharp => d4sharp_window(x, h, params)?,
        };
        Ok(S4Weights { x, weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        crate::scalar::pairwise_sum(&self.weights)
    }

    pub fn eval<T: Real>(&self, alpha: T) -> Complex<T> {
        let terms: Vec<Complex<T>> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| e(frac_mul(self.x + i as u64, alpha)) * T::lit(w))
            .collect();
        pairwise_sum_c(&terms)
    }

    /// Value at `a/q + η` with `a/q` kept exact.
    pub fn eval_at<T: Real>(&self, q: u64, a: u64, eta: T) -> Complex<T> {
        let terms: Vec<Complex<T>> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &w)| e_shifted(self.x + i as u64, q, a, eta) * T::lit(w))
            .collect();
        pairwise_sum_c(&terms)
    }
}

/// `S₄(α; H) = Σ_{n=X}^{X+H} d₄(n) e(nα)`, or the same with `d₄♯`.
pub fn s4_eval<T: Real>(
    alpha: T,
    x: u64,
    h: u64,
    window: &SieveWindow,
    params: &ApproximantParams,
    kind: S4Kind,
) -> Result<Complex<T>> {
    Ok(S4Weights::new(x, h, window, params, kind)?.eval(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_window;

    fn spec(which: Interval, x: u64, h: u64) -> IntervalSpec {
        IntervalSpec::new(which, x, h).unwrap()
    }

    #[test]
    fn interval_bounds() {
        assert_eq!(spec(Interval::I1, 20, 10).bounds(), (11, 20));
        assert_eq!(spec(Interval::I2, 20, 10).bounds(), (1, 10));
        assert!(IntervalSpec::new(Interval::I1, 5, 6).is_err());
    }

    #[test]
    fn t_sum_named_values() {
        let s = spec(Interval::I2, 10, 4);
        assert_eq!(t_sum(&s, 0.0f64), Complex::new(4.0, 0.0));
        assert!(t_sum(&s, 0.5f64).norm() < 1e-14);
        for &eta in &[0.1f64, -0.3, 0.77, 1e-9, -1e-7, 3.25] {
            for w in [Interval::I1, Interval::I2] {
                let s = spec(w, 1000, 37);
                let d = t_sum(&s, eta) - t_sum_direct(&s, eta);
                assert!(d.norm() < 1e-10, "η = {eta}");
            }
        }
    }

    #[test]
    fn s_and_r_terms() {
        let w = build_window(1, 30).unwrap();
        let psi10 = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        let s2 = spec(Interval::I2, 20, 10);
        assert!((s_sum(&s2, 0.0f64, &w).unwrap().re - psi10).abs() < 1e-12);
        let s1 = spec(Interval::I1, 20, 10);
        let want = 11f64.ln() + 13f64.ln() + 2f64.ln() + 17f64.ln() + 19f64.ln();
        assert!((s_sum(&s1, 0.0f64, &w).unwrap().re - want).abs() < 1e-12);
        let r = r_term(&s2, 0.0f64, 1, 1, &w).unwrap();
        assert!((r.re - (psi10 - 10.0)).abs() < 1e-12);
        let r4 = r_term(&s2, 0.01f64, 4, 3, &w).unwrap();
        let s4 = s_sum(&s2, 0.76f64, &w).unwrap();
        assert!((r4 - s4).norm() < 1e-12);
        assert_eq!(r_term(&s2, 0.0f64, 4, 2, &w).unwrap_err().kind(), "domain");
    }

    #[test]
    fn window_mismatch_is_domain_error() {
        let w = build_window(5, 10).unwrap();
        let s2 = spec(Interval::I2, 20, 10);
        assert_eq!(s_sum(&s2, 0.0f64, &w).unwrap_err().kind(), "domain");
    }

    #[test]
    fn w_term_principal_mod_one() {
        let w = build_window(1, 30).unwrap();
        let chi = DirichletCharacter::principal(1).unwrap();
        let s2 = spec(Interval::I2, 20, 10);
        let v = w_term(&s2, &chi, 0.0f64, &w).unwrap();
        assert!((v.re + 2.168).abs() < 1e-3);
    }
}
