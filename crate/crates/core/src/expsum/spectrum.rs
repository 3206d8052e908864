//! Exponential sums sampled on the discrete circle `{j/N}`.
//!
//! For weights supported on `[0, N)` the map `w ↦ (Σ_n w(n) e(nj/N))_j` is a
//! DFT, and the circle-method integral `∫₀¹ S₁S₂ e(−mα) dα` becomes the exact
//! finite sum `N⁻¹ Σ_j S₁(j/N) S₂(j/N) e(−mj/N)` as long as `N` exceeds every
//! sum of support points.

use std::io::Write;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{ensure, Result};
use crate::scalar::{e_mul, pairwise_sum, Real};

/// Largest grid accepted by [`spectrum`].
pub const SPECTRUM_CAP: usize = 1 << 27;

#[derive(Debug, Clone)]
pub struct SpectrumGrid<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> SpectrumGrid<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Pointwise product of two spectra on the same grid.
    pub fn mul(&self, other: &SpectrumGrid<T>) -> SpectrumGrid<T> {
        assert_eq!(self.len(), other.len(), "spectra on different grids");
        SpectrumGrid { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() }
    }

    /// Recovers the coefficients `c[m] = N⁻¹ Σ_j values[j] e(−mj/N)`.
    pub fn coefficients(&self) -> Vec<Complex<T>> {
        let n = self.len();
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = T::one() / T::from_usize(n).unwrap();
        buf.iter_mut().for_each(|z| *z = *z * scale);
        buf
    }

    /// `N⁻¹ Σ_j |values[j]|²`.
    pub fn mean_square(&self) -> T {
        let sq: Vec<T> = self.values.iter().map(|z| z.norm_sqr()).collect();
        pairwise_sum(&sq) / T::from_usize(self.len()).unwrap()
    }

    /// Writes `j,re,im` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "re", "im"])?;
        for (j, z) in self.values.iter().enumerate() {
            w.write_record([j.to_string(), z.re.to_string(), z.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Spectrum of sparse weights `(n, w(n))` on a grid of size `n_grid`.
pub fn spectrum<T: Real, I>(weights: I, n_grid: usize) -> Result<SpectrumGrid<T>>
where
    I: IntoIterator<Item = (u64, T)>,
{
    ensure!(n_grid >= 1, Precondition, "grid size must be ≥ 1");
    ensure!(n_grid <= SPECTRUM_CAP, Resource, "grid size {n_grid} exceeds {SPECTRUM_CAP}");
    let mut buf = vec![Complex::new(T::zero(), T::zero()); n_grid];
    for (n, w) in weights {
        ensure!(
            (n as u128) < n_grid as u128,
            Precondition,
            "support point {n} aliases on a grid of size {n_grid}"
        );
        buf[n as usize] = buf[n as usize] + Complex::new(w, T::zero());
    }
    FftPlanner::new().plan_fft_inverse(n_grid).process(&mut buf);
    Ok(SpectrumGrid { values: buf })
}

/// Spectrum of dense weights `w[i]` placed at `offset + i`.
pub fn spectrum_dense<T: Real>(offset: u64, weights: &[T], n_grid: usize) -> Result<SpectrumGrid<T>> {
    spectrum(weights.iter().enumerate().map(|(i, &w)| (offset + i as u64, w)), n_grid)
}

/// Direct evaluation of a single grid value, for cross-checks.
pub fn spectrum_point<T: Real>(weights: &[(u64, T)], j: usize, n_grid: usize) -> Complex<T> {
    let alpha = T::from_usize(j).unwrap() / T::from_usize(n_grid).unwrap();
    let terms: Vec<Complex<T>> = weights.iter().map(|&(n, w)| e_mul(n, alpha) * w).collect();
    crate::scalar::pairwise_sum_c(&terms)
}
