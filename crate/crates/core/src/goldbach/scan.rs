use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{m_star, r_star_all, singular_closed, SingularSeries};
use crate::approximant::ApproximantParams;
use crate::arith::{build_window, SieveWindow, WINDOW_LENGTH_CAP};
use crate::digitset::{DigitSystem, RestrictedSet};
use crate::dissection::{classify, farey_fractions, ArcLabel, CircleParams};
use crate::error::{ensure, Error, Result};
use crate::expsum::{S4Kind, S4Weights};
use crate::scalar::{e, frac_mul, pairwise_sum_c};

pub const SCAN_SCHEMA: &str = "scan-v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Truncation point of the singular series in each record.
    pub singular_qmax: u64,
    /// Number of minor-arc frequencies in the suppression probe; 0 skips it.
    pub probe_samples: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { singular_qmax: 10_000, probe_samples: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub base: u64,
    pub digit: u64,
    pub x: u64,
    pub h: u64,
    pub circle: CircleParams,
    pub r4: f64,
    pub cutoff: u64,
    pub convolution_grid: usize,
    pub options: ScanOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldbachRecord {
    pub two_n: u64,
    pub r_star: f64,
    pub m_star: u64,
    pub sigma_trunc: f64,
    pub sigma_closed: f64,
    pub predicted: f64,
    /// `r_star / predicted`; absent when `predicted = 0`.
    pub ratio: Option<f64>,
    /// Some prime `p ∈ I₁` and prime `p' ∈ I₂` have `p + p' = 2n`.
    pub has_split_rep: bool,
    /// `2n` is a sum of two primes.
    pub has_any_rep: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub set_size: u64,
    pub even_members: u64,
    pub split_exceptions: u64,
    pub any_exceptions: u64,
    pub split_exceptional_fraction: f64,
    pub ratio_flagged: u64,
    pub ratio_min: Option<f64>,
    pub ratio_median: Option<f64>,
    /// `Σ_{n ∈ set} d₄(n)`
    pub sum_d4: f64,
    /// `Σ d₄ / ((log X)⁷ |set|)`
    pub d4_density_ratio: f64,
    /// `Σ_{n ∈ set} d₂(n)²`
    pub sum_d2_squared: f64,
    /// `d₂(n)² ≤ d₄(n)` for every member.
    pub d2_squared_le_d4: bool,
    /// `|Σ_m R*(m) − ψ(I₁)ψ(I₂)|` relative to the product.
    pub mass_identity_error: f64,
}

/// Largest `|S(α)|/H` on sampled minor-arc frequencies against the same
/// quantity at the major-arc centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorArcProbe {
    pub seed: u64,
    pub samples: usize,
    pub attempts: usize,
    /// `frac(u₀ + kφ⁻¹)` with `u₀` drawn from the seeded generator.
    pub sequence: String,
    pub centres: usize,
    pub s4sharp_minor_max: f64,
    pub s4sharp_major_peak: f64,
    pub s4sharp_ratio: f64,
    pub s1_minor_max: f64,
    pub s1_major_peak: f64,
    pub s1_ratio: f64,
    pub s2_minor_max: f64,
    pub s2_major_peak: f64,
    pub s2_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: String,
    pub params: ScanParams,
    pub records: Vec<GoldbachRecord>,
    pub summary: ScanSummary,
    pub probe: Option<MinorArcProbe>,
}

fn sum_at(pts: &[(u64, f64)], alpha: f64) -> Complex64 {
    let t: Vec<Complex64> = pts.iter().map(|&(n, w)| e(frac_mul(n, alpha)) * w).collect();
    pairwise_sum_c(&t)
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    Some(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
}

/// Goldbach statistics for the even members of `[X, X+H]*`.
pub fn scan(
    system: DigitSystem,
    x: u64,
    h: u64,
    params: &CircleParams,
    approx: &ApproximantParams,
    options: &ScanOptions,
) -> Result<ScanReport> {
    ensure!(params.x == x && params.h == h, Precondition, "circle parameters were built for a different (X, H)");
    ensure!(h <= x, Precondition, "H = {h} exceeds X = {x}");
    let top = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
    ensure!(top <= WINDOW_LENGTH_CAP, Resource, "scan needs a sieve window up to {top}, over {WINDOW_LENGTH_CAP}");
    let window = build_window(1, top)?;
    scan_with_window(system, x, h, params, approx, options, &window)
}

/// [`scan`] on a prebuilt window covering `[1, X + H]`.
pub fn scan_with_window(
    system: DigitSystem,
    x: u64,
    h: u64,
    params: &CircleParams,
    approx: &ApproximantParams,
    options: &ScanOptions,
    window: &SieveWindow,
) -> Result<ScanReport> {
    ensure!(params.x == x && params.h == h, Precondition, "circle parameters were built for a different (X, H)");
    ensure!(h <= x, Precondition, "H = {h} exceeds X = {x}");
    let top = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
    window.require(1, top)?;
    let set = RestrictedSet::short_interval(system, x, h)?;
    let table = r_star_all(x, h, window)?;
    let series = SingularSeries::new(options.singular_qmax)?;

    let small_primes: Vec<u64> = (2..=h).filter(|&p| window.is_prime(p)).collect();
    let all_primes: Vec<u64> = (2..=top).filter(|&p| window.is_prime(p)).collect();
    let lo1 = x - h + 1;

    let mut records = Vec::new();
    let mut sum_d4 = 0.0;
    let mut sum_d2_sq = 0.0;
    let mut chain = true;
    for n in set.members()? {
        let d2 = window.d2(n) as f64;
        let d4 = window.d4(n) as f64;
        sum_d4 += d4;
        sum_d2_sq += d2 * d2;
        chain &= d2 * d2 <= d4;
        if n % 2 != 0 {
            continue;
        }
        let r = table.get(n);
        let ms = m_star(n, x, h);
        let sigma_trunc = series.truncated(n as i64).value;
        let sigma_closed = singular_closed(n)?;
        let predicted = ms as f64 * sigma_closed;
        let has_split_rep = small_primes.iter().any(|&p| {
            n.checked_sub(p).is_some_and(|q| q >= lo1 && q <= x && window.is_prime(q))
        });
        let has_any_rep = all_primes
            .iter()
            .take_while(|&&p| 2 * p <= n)
            .any(|&p| window.is_prime(n - p));
        records.push(GoldbachRecord {
            two_n: n,
            r_star: r,
            m_star: ms,
            sigma_trunc,
            sigma_closed,
            predicted,
            ratio: (predicted != 0.0).then(|| r / predicted),
            has_split_rep,
            has_any_rep,
        });
    }

    let set_size = set.count();
    let even = records.len() as u64;
    let split_exceptions = records.iter().filter(|r| !r.has_split_rep).count() as u64;
    let any_exceptions = records.iter().filter(|r| !r.has_any_rep).count() as u64;
    let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    let psi1 = window.lambda_mass(lo1, x)?;
    let psi2 = window.lambda_mass(1, h)?;
    let summary = ScanSummary {
        set_size,
        even_members: even,
        split_exceptions,
        any_exceptions,
        split_exceptional_fraction: if even == 0 { 0.0 } else { split_exceptions as f64 / even as f64 },
        ratio_flagged: even - ratios.len() as u64,
        ratio_min: ratios.iter().copied().reduce(f64::min),
        ratio_median: median(ratios),
        sum_d4,
        d4_density_ratio: sum_d4 / ((x as f64).ln().powi(7) * set_size.max(1) as f64),
        sum_d2_squared: sum_d2_sq,
        d2_squared_le_d4: chain,
        mass_identity_error: (table.total() - psi1 * psi2).abs() / (psi1 * psi2).max(f64::MIN_POSITIVE),
    };
    let probe = if options.probe_samples > 0 {
        Some(minor_arc_probe(x, h, window, params, approx, options)?)
    } else {
        None
    };
    Ok(ScanReport {
        schema: SCAN_SCHEMA.to_string(),
        params: ScanParams {
            base: system.base(),
            digit: system.forbidden(),
            x,
            h,
            circle: *params,
            r4: approx.r4(),
            cutoff: approx.cutoff(),
            convolution_grid: table.grid(),
            options: *options,
        },
        records,
        summary,
        probe,
    })
}

/// Suppression of `S₄♯(α; H)`, `S₁` and `S₂` on the minor arcs.
pub fn minor_arc_probe(
    x: u64,
    h: u64,
    window: &SieveWindow,
    params: &CircleParams,
    approx: &ApproximantParams,
    options: &ScanOptions,
) -> Result<MinorArcProbe> {
    let s4 = S4Weights::new(x, h, window, approx, S4Kind::D4Sharp)?;
    let lo1 = x - h + 1;
    window.require(lo1, x)?;
    window.require(1, h)?;
    let p1: Vec<(u64, f64)> = (lo1..=x).map(|n| (n, window.lambda(n))).filter(|t| t.1 != 0.0).collect();
    let p2: Vec<(u64, f64)> = (1..=h).map(|n| (n, window.lambda(n))).filter(|t| t.1 != 0.0).collect();
    let hf = h as f64;
    let norms = |alpha: f64, q: u64, a: u64| -> [f64; 3] {
        let v4 = if q == 0 { s4.eval(alpha) } else { s4.eval_at(q, a, 0.0) };
        [v4.norm() / hf, sum_at(&p1, alpha).norm() / hf, sum_at(&p2, alpha).norm() / hf]
    };

    let centres: Vec<(i64, i64)> = farey_fractions(params.q)?.into_iter().skip(1).collect();
    let mut peak = [0.0f64; 3];
    for &(r, q) in &centres {
        let v = norms(r as f64 / q as f64, q as u64, (r % q) as u64);
        for i in 0..3 {
            peak[i] = peak[i].max(v[i]);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let u0: f64 = rng.random();
    let step = (5f64.sqrt() - 1.0) / 2.0;
    let mut minor = [0.0f64; 3];
    let mut accepted = 0;
    let mut attempts = 0;
    let max_attempts = options.probe_samples.saturating_mul(100).max(1000);
    while accepted < options.probe_samples {
        ensure!(
            attempts < max_attempts,
            Numeric,
            "only {accepted} of {} samples landed on minor arcs after {attempts} attempts",
            options.probe_samples
        );
        let alpha = (u0 + attempts as f64 * step).fract();
        attempts += 1;
        if classify(alpha, params) != ArcLabel::Minor {
            continue;
        }
        accepted += 1;
        let v = norms(alpha, 0, 0);
        for i in 0..3 {
            minor[i] = minor[i].max(v[i]);
        }
    }
    let ratio = |i: usize| if peak[i] > 0.0 { minor[i] / peak[i] } else { f64::INFINITY };
    Ok(MinorArcProbe {
        seed: options.seed,
        samples: options.probe_samples,
        attempts,
        sequence: "golden-weyl".to_string(),
        centres: centres.len(),
        s4sharp_minor_max: minor[0],
        s4sharp_major_peak: peak[0],
        s4sharp_ratio: ratio(0),
        s1_minor_max: minor[1],
        s1_major_peak: peak[1],
        s1_ratio: ratio(1),
        s2_minor_max: minor[2],
        s2_major_peak: peak[2],
        s2_ratio: ratio(2),
    })
}

/// One CSV row per record.
pub fn write_scan_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &report.records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
