//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_segments: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig {
            abs_tol: T::lit(1e-10),
            rel_tol: T::lit(1e-10),
            max_segments: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V, T> {
    pub value: V,
    pub error: T,
    pub segments: usize,
}

struct Segment<T: Real> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

fn kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> (Complex<T>, T)
where
    F: FnMut(T) -> Complex<T>,
{
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let dx = half * T::lit(XGK[i]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::lit(WG[i / 2]);
        }
    }
    let value = k * half;
    let err = ((k - g) * half).norm();
    (value, err)
}

/// Integrates a complex-valued function over `[a, b]`.
pub fn integrate_complex<T, F>(
    mut f: F,
    a: T,
    b: T,
    cfg: &QuadConfig<T>,
) -> Result<QuadResult<Complex<T>, T>>
where
    T: Real,
    F: FnMut(T) -> Complex<T>,
{
    if a == b {
        return Ok(QuadResult { value: Complex::new(T::zero(), T::zero()), error: T::zero(), segments: 0 });
    }
    let (v, err) = kronrod(&mut f, a, b);
    let mut segs = vec![Segment { a, b, value: v, error: err }];
    loop {
        let total: Complex<T> = segs.iter().fold(Complex::new(T::zero(), T::zero()), |s, x| s + x.value);
        let total_err: T = segs.iter().fold(T::zero(), |s, x| s + x.error);
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= target {
            return Ok(QuadResult { value: total, error: total_err, segments: segs.len() });
        }
        if segs.len() >= cfg.max_segments {
            return Err(Error::Numeric(format!(
                "quadrature did not converge on [{a}, {b}]: error estimate {total_err} > {target} after {} segments",
                segs.len()
            )));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, s)| if s.error > be { (i, s.error) } else { (bi, be) });
        let s = segs.swap_remove(worst);
        let m = (s.a + s.b) * T::lit(0.5);
        let (v1, e1) = kronrod(&mut f, s.a, m);
        let (v2, e2) = kronrod(&mut f, m, s.b);
        segs.push(Segment { a: s.a, b: m, value: v1, error: e1 });
        segs.push(Segment { a: m, b: s.b, value: v2, error: e2 });
    }
}

/// Integrates a real-valued function over `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<QuadResult<T, T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let r = integrate_complex(|x| Complex::new(f(x), T::zero()), a, b, cfg)?;
    Ok(QuadResult { value: r.value.re, error: r.error, segments: r.segments })
}
