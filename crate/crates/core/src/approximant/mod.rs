//! The divisor approximant `d₄♯(n) = Σ_{m ≤ R₄⁶, m | n} P_m(log n)`.
//!
//! `P_m` is assembled from ordered factorizations `m = n₁n₂n₃` in which the
//! first `j` factors are at most `R₄` and the remaining ones lie in
//! `(R₄, R₄²]`. Every such factor is at most `R₄²`, so the table is built by
//! running over factor triples directly instead of factoring each `m`.

mod cubic;

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, SmallTables};
use crate::error::{ensure, Error, Result};
use crate::quad::{integrate_complex, QuadConfig};
use crate::scalar::{e, frac, frac_mul, pairwise_sum_c};

pub use cubic::Cubic;

/// Largest number of factor triples `⌊R₄²⌋³` enumerated for a table.
pub const TRIPLE_CAP: u64 = 50_000_000;
/// Largest `Σ_m (H/m + 1)` accepted by [`d4sharp_window`].
pub const WINDOW_WORK_CAP: u64 = 500_000_000;

const BINOM4: [f64; 4] = [1.0, 4.0, 6.0, 4.0];
const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Adds `w·(t − shift)^k / (k!·log^k R₄)` to `acc`.
fn add_shifted_power(acc: &mut [f64; 4], w: f64, shift: f64, k: usize, log_r4: f64) {
    let scale = w / (FACT[k] * log_r4.powi(k as i32));
    let mut binom = 1.0;
    for (i, a) in acc.iter_mut().enumerate().take(k + 1) {
        // coefficient of t^i in (t − shift)^k
        *a += scale * binom * (-shift).powi((k - i) as i32);
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
}

fn r4_checked(r4: f64) -> Result<(f64, u64)> {
    ensure!(r4.is_finite() && r4 >= 1.0, Domain, "R₄ must be a finite real ≥ 1, got {r4}");
    let big = (r4 * r4).floor() as u64;
    ensure!(
        (big as u128).pow(3) <= TRIPLE_CAP as u128,
        Resource,
        "R₄ = {r4} needs {}³ factor triples, over {TRIPLE_CAP}",
        big
    );
    Ok((r4.ln(), big))
}

/// `⌊R₄⁶⌋`, computed so that integer powers of integers are not lost to
/// rounding.
fn cutoff_for(r4: f64) -> u64 {
    let c = r4.powi(6);
    let r = c.round();
    if (c - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        c.floor() as u64
    }
}

fn small_bound(r4: f64) -> u64 {
    let r = r4.round();
    if (r4 - r).abs() <= 1e-12 * r { r as u64 } else { r4.floor() as u64 }
}

fn large_bound(r4: f64) -> u64 {
    let s = r4 * r4;
    let r = s.round();
    if (s - r).abs() <= 1e-12 * r { r as u64 } else { s.floor() as u64 }
}

/// `P_m` by direct expansion of its defining sum.
pub fn pm_poly(m: u64, r4: f64) -> Result<Cubic<f64>> {
    let (log_r4, _) = r4_checked(r4)?;
    ensure!(m >= 1, Domain, "m must be ≥ 1");
    ensure!(m <= cutoff_for(r4), Domain, "m = {m} exceeds the cutoff ⌊R₄⁶⌋ = {}", cutoff_for(r4));
    let small = small_bound(r4);
    let large = large_bound(r4);
    let mut acc = [0.0; 4];
    for a in divisors(m) {
        for b in divisors(m / a) {
            let c = m / a / b;
            let triple = [a, b, c];
            if let Some(j) = pattern(&triple, small, large) {
                let prefix: f64 = triple[..j].iter().map(|&n| (n as f64).ln()).sum();
                add_shifted_power(&mut acc, BINOM4[j], prefix + (4 - j) as f64 * log_r4, 3 - j, log_r4);
            }
        }
    }
    Ok(Cubic::new(acc))
}

/// The `j` for which a triple has the shape small…small large…large.
fn pattern(t: &[u64; 3], small: u64, large: u64) -> Option<usize> {
    let j = t.iter().take_while(|&&n| n <= small).count();
    t[j..].iter().all(|&n| n > small && n <= large).then_some(j)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproximantParams {
    x: u64,
    epsilon: f64,
    r4: f64,
    cutoff: u64,
    /// `(m, P_m)` for every `m` with a nonzero polynomial, ascending.
    table: Vec<(u64, Cubic<f64>)>,
}

impl ApproximantParams {
    /// `R₄ = X^{ε/40}`.
    pub fn new(x: u64, epsilon: f64) -> Result<Self> {
        ensure!(x >= 2, Domain, "X must be ≥ 2");
        ensure!(epsilon > 0.0 && epsilon < 1.0, Domain, "ε must lie in (0, 1), got {epsilon}");
        Self::with_r4(x, epsilon, (x as f64).powf(epsilon / 40.0))
    }

    /// Explicit `R₄`, independent of ε.
    pub fn with_r4(x: u64, epsilon: f64, r4: f64) -> Result<Self> {
        ensure!(x >= 2, Domain, "X must be ≥ 2");
        let (log_r4, _) = r4_checked(r4)?;
        let small = small_bound(r4);
        let large = large_bound(r4);
        let cutoff = cutoff_for(r4);
        let mut acc: HashMap<u64, [f64; 4]> = HashMap::new();
        let logs: Vec<f64> = (0..=large).map(|n| if n == 0 { 0.0 } else { (n as f64).ln() }).collect();
        for j in 0..=3usize {
            let ranges: Vec<(u64, u64)> = (0..3).map(|i| if i < j { (1, small) } else { (small + 1, large) }).collect();
            for a in ranges[0].0..=ranges[0].1 {
                for b in ranges[1].0..=ranges[1].1 {
                    for c in ranges[2].0..=ranges[2].1 {
                        let t = [a, b, c];
                        let prefix: f64 = t[..j].iter().map(|&n| logs[n as usize]).sum();
                        let m = a * b * c;
                        let entry = acc.entry(m).or_insert([0.0; 4]);
                        add_shifted_power(entry, BINOM4[j], prefix + (4 - j) as f64 * log_r4, 3 - j, log_r4);
                    }
                }
            }
        }
        let mut table: Vec<(u64, Cubic<f64>)> = acc
            .into_iter()
            .filter(|&(m, _)| m <= cutoff)
            .map(|(m, c)| (m, Cubic::new(c)))
            .collect();
        table.sort_by_key(|&(m, _)| m);
        Ok(ApproximantParams { x, epsilon, r4, cutoff, table })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn r4(&self) -> f64 {
        self.r4
    }

    /// `⌊R₄⁶⌋`.
    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Nonzero entries of the table, ascending in `m`.
    pub fn table(&self) -> &[(u64, Cubic<f64>)] {
        &self.table
    }

    /// `P_m` from the table (zero when `m` has no admissible factorization).
    pub fn pm(&self, m: u64) -> Result<Cubic<f64>> {
        ensure!(m >= 1 && m <= self.cutoff, Domain, "m = {m} outside [1, {}]", self.cutoff);
        Ok(self.lookup(m).copied().unwrap_or_default())
    }

    fn lookup(&self, m: u64) -> Option<&Cubic<f64>> {
        self.table.binary_search_by_key(&m, |&(k, _)| k).ok().map(|i| &self.table[i].1)
    }

    /// Smallest C with `|P_m(log n)| ≤ C·d₃(m)·(1 + log X)³` for every
    /// tabulated `m` and all `n ∈ [X, 2X]`.
    pub fn envelope_constant(&self) -> f64 {
        let max_m = self.table.last().map_or(1, |&(m, _)| m);
        let d3 = SmallTables::new(max_m as usize).d3();
        let lx = (self.x as f64).ln();
        let env = (1.0 + lx).powi(3);
        let (t0, t1) = (lx, (2.0 * self.x as f64).ln());
        self.table
            .iter()
            .map(|(m, p)| p.max_abs_on(t0, t1) / (d3[*m as usize] as f64 * env))
            .fold(0.0, f64::max)
    }

    /// Writes `m,c0,c1,c2,c3` rows for the nonzero polynomials.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["m", "c0", "c1", "c2", "c3"])?;
        for (m, p) in &self.table {
            let c = p.coefficients();
            w.write_record([m.to_string(), c[0].to_string(), c[1].to_string(), c[2].to_string(), c[3].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `d₄♯(n)`.
pub fn d4sharp_point(n: u64, params: &ApproximantParams) -> Result<f64> {
    ensure!(n >= 1, Domain, "n must be ≥ 1");
    let t = (n as f64).ln();
    Ok(divisors(n)
        .into_iter()
        .take_while(|&m| m <= params.cutoff)
        .filter_map(|m| params.lookup(m))
        .map(|p| p.eval(t))
        .sum())
}

/// `d₄♯(n)` for every `n ∈ [X, X + H]`, by running over multiples of each
/// tabulated `m`.
pub fn d4sharp_window(x: u64, h: u64, params: &ApproximantParams) -> Result<Vec<f64>> {
    ensure!(x >= 1, Domain, "X must be ≥ 1");
    let hi = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
    let len = (h + 1) as usize;
    let work: u64 = params.table.iter().map(|&(m, _)| h / m + 1).sum();
    ensure!(work <= WINDOW_WORK_CAP, Resource, "d₄♯ window needs {work} updates, over {WINDOW_WORK_CAP}");
    let logs: Vec<f64> = (x..=hi).map(|n| (n as f64).ln()).collect();
    let mut out = vec![0.0; len];
    for (m, p) in &params.table {
        let first = x.div_ceil(*m) * m;
        let mut n = first;
        while n <= hi {
            let i = (n - x) as usize;
            out[i] += p.eval(logs[i]);
            n += m;
        }
    }
    Ok(out)
}

/// Both sides of the major-arc expansion of `Σ d₄♯(n) e(an/q) e(nβ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub direct: Complex<f64>,
    pub mainterm: Complex<f64>,
    pub abs_gap: f64,
    /// `q·X^{2ε}·(1 + H|β|)`
    pub paper_errbound: f64,
}

/// `Σ_m Σ_{b mod q} e(amb/q)/(mq) · P_m`, collapsed into one cubic.
///
/// The inner sum over `b` is `q` when `q | m` and 0 otherwise because
/// `gcd(a, q) = 1`.
pub fn mainterm_polynomial(q: u64, params: &ApproximantParams) -> Cubic<f64> {
    let mut acc = [0.0; 4];
    for (m, p) in &params.table {
        if m % q == 0 {
            let c = p.coefficients();
            for i in 0..4 {
                acc[i] += c[i] / *m as f64;
            }
        }
    }
    Cubic::new(acc)
}

/// Quadrature tolerance used by [`prop33_compare`], relative to `H`.
pub const PROP33_TOL: f64 = 1e-9;

pub fn prop33_compare(q: u64, a: u64, beta: f64, x: u64, h: u64, params: &ApproximantParams) -> Result<GapReport> {
    ensure!(q >= 1 && gcd(a, q) == 1, Domain, "need gcd(a, q) = 1, got a = {a}, q = {q}");
    ensure!(h >= 1, Precondition, "H must be ≥ 1");
    let weights = d4sharp_window(x, h, params)?;
    let terms: Vec<Complex<f64>> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let n = x + i as u64;
            let r = ((n as u128 * a as u128) % q as u128) as f64 / q as f64;
            e(frac(r + frac_mul(n, beta))) * w
        })
        .collect();
    let direct = pairwise_sum_c(&terms);
    let poly = mainterm_polynomial(q, params);
    let (lo, hi) = (x as f64, (x + h) as f64);
    let mainterm = if beta == 0.0 {
        Complex::new(poly.integral_log(lo, hi), 0.0)
    } else {
        let cfg = QuadConfig { abs_tol: PROP33_TOL * h as f64, rel_tol: 0.0, max_segments: 20_000 };
        integrate_complex(|u: f64| e(beta * u) * poly.eval(u.ln()), lo, hi, &cfg)?.value
    };
    let paper_errbound = q as f64 * (x as f64).powf(2.0 * params.epsilon) * (1.0 + h as f64 * beta.abs());
    Ok(GapReport { direct, mainterm, abs_gap: (direct - mainterm).norm(), paper_errbound })
}

/// Quadrature version of the β = 0 main term, for cross-checking the
/// closed-form antiderivative.
pub fn mainterm_by_quadrature(poly: &Cubic<f64>, lo: f64, hi: f64) -> Result<f64> {
    let cfg = QuadConfig { abs_tol: 1e-9 * (hi - lo).max(1.0), rel_tol: 0.0, max_segments: 20_000 };
    Ok(crate::quad::integrate(|u: f64| poly.eval(u.ln()), lo, hi, &cfg)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pm_named_values() {
        let p1 = pm_poly(1, 10.0).unwrap();
        assert_eq!(p1.coefficients(), [4.0, 0.0, 0.0, 0.0]);
        let l = 10f64.ln();
        let p = pm_poly(11, 10.0).unwrap();
        for t in [0.0, 1.0, 5.0, 13.0] {
            assert!((p.eval(t) - 6.0 * (t - 2.0 * l) / l).abs() < 1e-12);
        }
        assert_eq!(pm_poly(1_000_001, 10.0).unwrap_err().kind(), "domain");
    }

    #[test]
    fn table_matches_direct_expansion() {
        let params = ApproximantParams::with_r4(100_000, 0.3, 4.0).unwrap();
        assert_eq!(params.cutoff(), 4096);
        for m in 1..=params.cutoff() {
            let a = params.pm(m).unwrap();
            let b = pm_poly(m, 4.0).unwrap();
            for t in [0.0, 3.0, 11.5] {
                assert!((a.eval(t) - b.eval(t)).abs() <= 1e-9 * (1.0 + b.eval(t).abs()), "m = {m}");
            }
        }
    }

    #[test]
    fn small_r4_keeps_constant_term() {
        let params = ApproximantParams::new(1_000_000, 0.3).unwrap();
        assert_eq!(params.cutoff(), 1);
        assert_eq!(d4sharp_point(999_983, &params).unwrap(), 4.0);
    }

    #[test]
    fn window_matches_points() {
        let params = ApproximantParams::with_r4(1000, 0.3, 3.0).unwrap();
        let w = d4sharp_window(1000, 50, &params).unwrap();
        for (i, v) in w.iter().enumerate() {
            let p = d4sharp_point(1000 + i as u64, &params).unwrap();
            assert!((v - p).abs() < 1e-9);
        }
        assert_eq!(d4sharp_window(77, 0, &params).unwrap().len(), 1);
        assert_eq!(d4sharp_point(1, &params).unwrap(), 4.0);
    }

    #[test]
    fn closed_form_integral_matches_quadrature() {
        let params = ApproximantParams::with_r4(100_000, 0.3, 5.0).unwrap();
        let poly = mainterm_polynomial(1, &params);
        let a = poly.integral_log(1e5, 1.1e5);
        let b = mainterm_by_quadrature(&poly, 1e5, 1.1e5).unwrap();
        assert!((a - b).abs() < 1e-9 * 1e4, "{a} vs {b}");
    }

    #[test]
    fn pm_table_csv_header() {
        let params = ApproximantParams::with_r4(1000, 0.3, 2.0).unwrap();
        let mut buf = Vec::new();
        params.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("m,c0,c1,c2,c3\n1,4,0,0,0\n"));
    }
}
