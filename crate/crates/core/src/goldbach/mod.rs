//! Weighted Goldbach representations `R*(2n) = Σ_{h+k=2n, h ∈ I₁, k ∈ I₂} Λ(h)Λ(k)`
//! and the circle-method quantities built around them.

mod arcs;
mod scan;
mod singular;

use rustfft::FftPlanner;

use crate::arith::SieveWindow;
use crate::error::{ensure, Result};
use crate::expsum::{spectrum_dense, Interval, IntervalSpec, SPECTRUM_CAP};
use crate::scalar::pairwise_sum;

pub use arcs::{
    arc_split, arc_split_with, k_kernel, k_kernel_at, lemma17_constant, lemma17_double_sum, lemma17_via_ramanujan, ArcSplit,
    Lemma17Grid,
};
pub use scan::{
    minor_arc_probe, scan, scan_with_window, write_scan_csv, GoldbachRecord, MinorArcProbe, ScanOptions, ScanParams, ScanReport, ScanSummary,
    SCAN_SCHEMA,
};
pub use singular::{singular_closed, singular_truncated, twin_prime_constant, SingularSeries, SingularTruncated, TwinPrimeConstant};

fn intervals(x: u64, h: u64) -> Result<(IntervalSpec, IntervalSpec)> {
    Ok((IntervalSpec::new(Interval::I1, x, h)?, IntervalSpec::new(Interval::I2, x, h)?))
}

/// `R*(2n)` by direct summation over `k ∈ I₂`.
pub fn r_star(two_n: u64, x: u64, h: u64, window: &SieveWindow) -> Result<f64> {
    ensure!(two_n.is_multiple_of(2), Precondition, "2n = {two_n} is odd");
    let (i1, _) = intervals(x, h)?;
    let (lo1, hi1) = i1.bounds();
    window.require(lo1, hi1)?;
    window.require(1, h)?;
    let terms: Vec<f64> = (1..=h)
        .filter_map(|k| {
            let hh = two_n.checked_sub(k)?;
            (hh >= lo1 && hh <= hi1).then(|| window.lambda(hh) * window.lambda(k))
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `M*(2n) = |{k ∈ (0, H] : 2n − k ∈ (X − H, X]}|`.
pub fn m_star(two_n: u64, x: u64, h: u64) -> u64 {
    let (m, x, h) = (two_n as i128, x as i128, h as i128);
    let lo = (m - x).max(1);
    let hi = (m - x + h - 1).min(h);
    (hi - lo + 1).max(0) as u64
}

/// All sums `Σ_{h+k=m} Λ(h)Λ(k)` over `h ∈ I₁, k ∈ I₂` from one cyclic
/// convolution on a grid of size `N > X + H`.
#[derive(Debug, Clone)]
pub struct ConvolutionTable {
    x: u64,
    h: u64,
    grid: usize,
    /// value for `m = X − H + 2 + i`
    values: Vec<f64>,
}

impl ConvolutionTable {
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Smallest and largest `m` with a possible representation.
    pub fn range(&self) -> (u64, u64) {
        (self.x - self.h + 2, self.x + self.h)
    }

    /// `R*(m)`; zero outside [`ConvolutionTable::range`].
    pub fn get(&self, m: u64) -> f64 {
        let (lo, hi) = self.range();
        if m < lo || m > hi {
            0.0
        } else {
            self.values[(m - lo) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let lo = self.range().0;
        self.values.iter().enumerate().map(move |(i, &v)| (lo + i as u64, v))
    }

    /// Σ over every `m`, which equals `ψ(I₁)·ψ(I₂)`.
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.values)
    }
}

/// Grid size used by [`r_star_all`]: the next power of two above `X + H`.
pub fn convolution_grid(x: u64, h: u64) -> Result<usize> {
    let n = (x + h + 1).next_power_of_two();
    ensure!(n as u128 <= SPECTRUM_CAP as u128, Resource, "convolution grid {n} exceeds {SPECTRUM_CAP}");
    Ok(n as usize)
}

/// `R*` at every `m` through `N⁻¹ Σ_j S₁(j/N) S₂(j/N) e(−mj/N)`.
pub fn r_star_all(x: u64, h: u64, window: &SieveWindow) -> Result<ConvolutionTable> {
    let (i1, _) = intervals(x, h)?;
    let (lo1, hi1) = i1.bounds();
    window.require(lo1, hi1)?;
    window.require(1, h)?;
    let grid = convolution_grid(x, h)?;
    let w1: Vec<f64> = (lo1..=hi1).map(|n| window.lambda(n)).collect();
    let w2: Vec<f64> = (1..=h).map(|n| window.lambda(n)).collect();
    let s1 = spectrum_dense(lo1, &w1, grid)?;
    let s2 = spectrum_dense(1, &w2, grid)?;
    let mut prod = s1.mul(&s2).values().to_vec();
    FftPlanner::new().plan_fft_forward(grid).process(&mut prod);
    let scale = 1.0 / grid as f64;
    let lo = (x - h + 2) as usize;
    let hi = (x + h) as usize;
    // every nonzero term is at least (log 2)², so anything far below that is
    // transform round-off on an empty representation set
    let floor = 0.5 * std::f64::consts::LN_2.powi(2);
    let values = prod[lo..=hi]
        .iter()
        .map(|z| z.re * scale)
        .map(|v| if v.abs() < floor { 0.0 } else { v })
        .collect();
    Ok(ConvolutionTable { x, h, grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_window;

    #[test]
    fn named_r_star() {
        let w = build_window(1, 40).unwrap();
        let l = |n: f64| n.ln();
        let want = l(2.0) * l(2.0) + l(17.0) * l(7.0) + l(19.0) * l(5.0);
        assert!((r_star(24, 20, 10, &w).unwrap() - want).abs() < 1e-12);
        assert_eq!(r_star(40, 20, 10, &w).unwrap(), 0.0);
        assert_eq!(r_star(23, 20, 10, &w).unwrap_err().kind(), "precondition");
    }

    #[test]
    fn named_m_star() {
        assert_eq!(m_star(24, 20, 10), 7);
        assert_eq!(m_star(40, 20, 10), 0);
        assert_eq!(m_star(12, 20, 10), 1);
    }

    #[test]
    fn convolution_agrees_with_direct() {
        let (x, h) = (500, 100);
        let w = build_window(1, x + h).unwrap();
        let t = r_star_all(x, h, &w).unwrap();
        for m in (x - h + 2..=x + h).step_by(2) {
            let d = r_star(m, x, h, &w).unwrap();
            assert!((t.get(m) - d).abs() <= 1e-9 * d.max(1.0), "m = {m}");
        }
        let (i1, i2) = intervals(x, h).unwrap();
        let (a, b) = (i1.bounds(), i2.bounds());
        let mass = w.lambda_mass(a.0, a.1).unwrap() * w.lambda_mass(b.0, b.1).unwrap();
        assert!((t.total() - mass).abs() < 1e-9 * mass);
    }
}
