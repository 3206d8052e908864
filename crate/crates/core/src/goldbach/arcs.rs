use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::{intervals, r_star_all, ConvolutionTable};
use crate::approximant::ApproximantParams;
use crate::arith::{divisor_k, gcd, ramanujan_sum, SieveWindow};
use crate::dissection::{farey_fractions, CircleParams};
use crate::error::{ensure, Result};
use crate::quad::{integrate, integrate_complex, QuadConfig};
use crate::scalar::{e, e_ratio, frac_mul, pairwise_sum, pairwise_sum_c};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSplit {
    pub two_n: u64,
    pub r_star: f64,
    /// Adaptive quadrature over the major windows.
    pub major: f64,
    /// `r_star − major`.
    pub minor: f64,
    /// Summed quadrature error estimate.
    pub quad_error: f64,
    /// The same major integral evaluated termwise from the convolution
    /// coefficients.
    pub major_exact: f64,
    pub windows: usize,
}

/// `∫_{c−β}^{c+β} e(dα) dα`.
fn window_integral(d: i64, c_num: i64, c_den: u64, beta: f64) -> Complex64 {
    if d == 0 {
        return Complex64::new(2.0 * beta, 0.0);
    }
    let phase: Complex64 = e_ratio(d * c_num, c_den);
    phase * ((TAU * d as f64 * beta).sin() / (PI * d as f64))
}

/// Splits `R*(2n)` into its major-arc integral and the remainder.
pub fn arc_split(two_n: u64, params: &CircleParams, window: &SieveWindow) -> Result<ArcSplit> {
    let table = r_star_all(params.x, params.h, window)?;
    arc_split_with(two_n, params, window, &table)
}

/// [`arc_split`] reusing a convolution table.
pub fn arc_split_with(
    two_n: u64,
    params: &CircleParams,
    window: &SieveWindow,
    table: &ConvolutionTable,
) -> Result<ArcSplit> {
    ensure!(two_n.is_multiple_of(2), Precondition, "2n = {two_n} is odd");
    let (x, h) = (params.x, params.h);
    let (i1, _) = intervals(x, h)?;
    let (lo1, hi1) = i1.bounds();
    window.require(lo1, hi1)?;
    window.require(1, h)?;
    let p1: Vec<(u64, f64)> = (lo1..=hi1).map(|n| (n, window.lambda(n))).filter(|t| t.1 != 0.0).collect();
    let p2: Vec<(u64, f64)> = (1..=h).map(|n| (n, window.lambda(n))).filter(|t| t.1 != 0.0).collect();
    let r = table.get(two_n);

    // reduced r/q with q ≤ Q, one representative per class mod 1
    let centres: Vec<(i64, i64)> = farey_fractions(params.q)?.into_iter().skip(1).collect();
    let beta = params.beta;
    let mass = p1.iter().map(|t| t.1).sum::<f64>() * p2.iter().map(|t| t.1).sum::<f64>();
    let cfg = QuadConfig { abs_tol: 1e-9 * mass.max(1.0) / centres.len() as f64, rel_tol: 0.0, max_segments: 200_000 };
    let sum_at = |pts: &[(u64, f64)], a: f64| -> Complex64 {
        let t: Vec<Complex64> = pts.iter().map(|&(n, w)| e(frac_mul(n, a)) * w).collect();
        pairwise_sum_c(&t)
    };
    let mut major = Vec::new();
    let mut errs = Vec::new();
    for &(num, den) in &centres {
        let c = num as f64 / den as f64;
        let res = integrate_complex(
            |eta: f64| {
                let a = c + eta;
                sum_at(&p1, a) * sum_at(&p2, a) * e(-frac_mul(two_n, a))
            },
            -beta,
            beta,
            &cfg,
        )?;
        major.push(res.value.re);
        errs.push(res.error);
    }
    let major_q = pairwise_sum(&major);

    let mut exact = Vec::new();
    for (m, v) in table.iter() {
        if v == 0.0 {
            continue;
        }
        let d = m as i64 - two_n as i64;
        let s: Complex64 = centres.iter().map(|&(num, den)| window_integral(d, num, den as u64, beta)).sum();
        exact.push(v * s.re);
    }
    Ok(ArcSplit {
        two_n,
        r_star: r,
        major: major_q,
        minor: r - major_q,
        quad_error: errs.iter().sum(),
        major_exact: pairwise_sum(&exact),
        windows: centres.len(),
    })
}

/// `Σ_{b mod q, l | b} Σ*_{a mod q} e(a(m'b − n)/q)`, by direct summation.
pub fn lemma17_double_sum(q: u64, l: u64, mprime: i64, n: i64) -> Result<Complex64> {
    ensure!(q >= 1 && l >= 1, Domain, "need q, l ≥ 1");
    ensure!(q.is_multiple_of(l), Domain, "l = {l} does not divide q = {q}");
    ensure!(gcd(mprime.unsigned_abs(), q) == 1, Domain, "gcd(m', q) ≠ 1 for m' = {mprime}, q = {q}");
    let table: Vec<Complex64> = (0..q).map(|k| e_ratio(k as i64, q)).collect();
    let units: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1).collect();
    let qi = q as i64;
    let mut terms = Vec::with_capacity(units.len() * (q / l) as usize);
    for b in (0..q).step_by(l as usize) {
        let k = (mprime.rem_euclid(qi) * b as i64 - n).rem_euclid(qi) as u64;
        for &a in &units {
            terms.push(table[((a * k) % q) as usize]);
        }
    }
    Ok(pairwise_sum_c(&terms))
}

/// The same double sum through `Σ_{l | b} c_q(m'b − n)`.
pub fn lemma17_via_ramanujan(q: u64, l: u64, mprime: i64, n: i64) -> Result<i64> {
    ensure!(q >= 1 && l >= 1 && q.is_multiple_of(l), Domain, "l = {l} does not divide q = {q}");
    Ok((0..q).step_by(l as usize).map(|b| ramanujan_sum(q, mprime * b as i64 - n)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma17Grid {
    pub qmax: u64,
    pub cases: u64,
    /// `max |value| / (d₂(q)·gcd(n, q))` over the grid.
    pub constant: f64,
    /// Largest deviation of a value from the nearest integer.
    pub max_rounding: f64,
}

/// Measures the constant in `|value| ≤ C·d₂(q)·gcd(n, q)` over
/// `q ≤ qmax`, `l | q`, `1 ≤ m', n ≤ qmax` with `gcd(m', q) = 1`.
pub fn lemma17_constant(qmax: u64) -> Result<Lemma17Grid> {
    ensure!((1..=200).contains(&qmax), Precondition, "grid size must lie in [1, 200]");
    let mut constant: f64 = 0.0;
    let mut max_rounding: f64 = 0.0;
    let mut cases = 0;
    for q in 1..=qmax {
        let d2 = divisor_k(2, q) as f64;
        for l in (1..=q).filter(|l| q % l == 0) {
            for mp in (1..=qmax as i64).filter(|&m| gcd(m as u64, q) == 1) {
                for n in 1..=qmax as i64 {
                    let v = lemma17_double_sum(q, l, mp, n)?;
                    max_rounding = max_rounding.max((v.re - v.re.round()).abs()).max(v.im.abs());
                    constant = constant.max(v.norm() / (d2 * gcd(n as u64, q) as f64));
                    cases += 1;
                }
            }
        }
    }
    Ok(Lemma17Grid { qmax, cases, constant, max_rounding })
}

/// `sin(x)/x`.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `K = ∫_X^{X+H} P_{m'l₂}(log u) sin(2πβ(u − n)) / (q(u − n)) du` with an
/// explicit `β`.
#[allow(clippy::too_many_arguments)]
pub fn k_kernel_at(
    h: u64,
    mprime: u64,
    l2: u64,
    n: f64,
    q: u64,
    x: u64,
    beta: f64,
    approx: &ApproximantParams,
) -> Result<f64> {
    ensure!(q >= 1 && h >= 1, Precondition, "need q, H ≥ 1");
    let m = mprime.saturating_mul(l2);
    let p = approx.pm(m)?;
    if beta == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = (x as f64, (x + h) as f64);
    let w = TAU * beta;
    let cfg = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_segments: 50_000 };
    let r = integrate(|u: f64| p.eval(u.ln()) * w * sinc(w * (u - n)) / q as f64, a, b, &cfg)?;
    Ok(r.value)
}

/// [`k_kernel_at`] with `X` and `β(δ)` taken from the circle parameters.
pub fn k_kernel(
    h: u64,
    mprime: u64,
    l2: u64,
    n: f64,
    q: u64,
    params: &CircleParams,
    approx: &ApproximantParams,
) -> Result<f64> {
    k_kernel_at(h, mprime, l2, n, q, params.x, params.beta, approx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_window;

    #[test]
    fn lemma17_named() {
        assert!((lemma17_double_sum(1, 1, 1, 0).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(lemma17_double_sum(2, 1, 1, 0).unwrap().norm() < 1e-12);
        assert_eq!(lemma17_double_sum(6, 4, 1, 0).unwrap_err().kind(), "domain");
        for (q, l, m, n) in [(12, 3, 5, 7), (30, 5, 7, 10), (8, 2, 3, 4)] {
            let a = lemma17_double_sum(q, l, m, n).unwrap();
            let b = lemma17_via_ramanujan(q, l, m, n).unwrap();
            assert!((a.re - b as f64).abs() < 1e-9 && a.im.abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_zero_beta_and_riemann_oracle() {
        let approx = ApproximantParams::with_r4(1000, 0.3, 3.0).unwrap();
        assert_eq!(k_kernel_at(100, 1, 1, 900.0, 1, 1000, 0.0, &approx).unwrap(), 0.0);
        let v = k_kernel_at(100, 2, 2, 900.0, 3, 1000, 0.01, &approx).unwrap();
        let p = approx.pm(4).unwrap();
        let steps = 1_000_000;
        let dx = 100.0 / steps as f64;
        let riemann: f64 = (0..steps)
            .map(|i| {
                let u = 1000.0 + (i as f64 + 0.5) * dx;
                p.eval(u.ln()) * (TAU * 0.01 * (u - 900.0)).sin() / (3.0 * (u - 900.0))
            })
            .sum::<f64>()
            * dx;
        assert!((v - riemann).abs() <= 1e-6 * riemann.abs(), "{v} vs {riemann}");
    }

    #[test]
    fn arc_split_identity_and_exact_major() {
        let (x, h) = (2000, 200);
        let params = CircleParams::unchecked(x, h, 0.1, 0.5).unwrap();
        assert!(2.0 * params.beta * (params.q as f64).powi(2) < 1.0, "{params:?}");
        let w = build_window(1, x + h).unwrap();
        let s = arc_split(2100, &params, &w).unwrap();
        assert!((s.major + s.minor - s.r_star).abs() <= 1e-6 * s.r_star + 1e-6);
        assert!((s.major - s.major_exact).abs() <= 1e-6 * s.r_star.max(1.0), "{s:?}");
    }
}
