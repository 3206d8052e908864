//! Farey dissection of the circle and the major/minor arc split.

mod audit;
mod diophantine;
mod farey;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{ensure, Result};

pub use audit::{typei_audit, AuditBranch, AuditConfig, AuditVerdict, BetaKind};
pub use diophantine::{continued_fraction, rational_approx, vinogradov_find, Vinogradov, WitnessSource};
pub use farey::{farey_dissection, farey_fractions, write_arcs_csv, FareyArc, FAREY_Q_CAP};

/// Default exponent `e` in `D(δ) = (log X)^{−e}`, i.e. `3⁶ + 1`.
pub const DEFAULT_LOG_EXPONENT: f64 = 730.0;

/// The circle-method parameters `δ = X^{−ε}`, `Q = ⌈δ⁻¹⌉`,
/// `D(δ) = (log X)^{−e}` and `β(δ) = 1/(H δ D(δ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleParams {
    pub x: u64,
    pub h: u64,
    pub epsilon: f64,
    pub log_exponent: f64,
    pub delta: f64,
    pub q: u64,
    pub d_delta: f64,
    pub beta: f64,
}

impl CircleParams {
    pub fn new(x: u64, h: u64, epsilon: f64) -> Result<Self> {
        Self::with_log_exponent(x, h, epsilon, DEFAULT_LOG_EXPONENT)
    }

    /// Rejects parameter sets whose major windows `r/q ± β(δ)` could
    /// overlap, i.e. unless `2β(δ)Q² < 1`.
    pub fn with_log_exponent(x: u64, h: u64, epsilon: f64, log_exponent: f64) -> Result<Self> {
        let p = Self::unchecked(x, h, epsilon, log_exponent)?;
        ensure!(
            2.0 * p.beta * (p.q as f64).powi(2) < 1.0,
            Precondition,
            "major windows overlap: 2·β(δ)·Q² = {:.3e} ≥ 1 (β(δ) = {:.3e}, Q = {}); lower the log exponent below {:.4} or change ε",
            2.0 * p.beta * (p.q as f64).powi(2),
            p.beta,
            p.q,
            Self::max_log_exponent(x, h, epsilon)?
        );
        Ok(p)
    }

    /// The parameters without the disjointness check.
    pub fn unchecked(x: u64, h: u64, epsilon: f64, log_exponent: f64) -> Result<Self> {
        ensure!(x >= 3, Domain, "X must be ≥ 3 so that log log X > 0");
        ensure!(h >= 1, Precondition, "H must be ≥ 1");
        ensure!(epsilon > 0.0 && epsilon < 1.0, Domain, "ε must lie in (0, 1), got {epsilon}");
        ensure!(log_exponent.is_finite(), Domain, "log exponent must be finite");
        let delta = (x as f64).powf(-epsilon);
        ensure!(delta > 0.0 && delta < 1.0, Domain, "δ = X^(−ε) = {delta} is not in (0, 1)");
        let q = (1.0 / delta).ceil() as u64;
        let d_delta = (x as f64).ln().powf(-log_exponent);
        let beta = 1.0 / (h as f64 * delta * d_delta);
        Ok(CircleParams { x, h, epsilon, log_exponent, delta, q, d_delta, beta })
    }

    /// Supremum of the log exponents accepted by
    /// [`CircleParams::with_log_exponent`].
    pub fn max_log_exponent(x: u64, h: u64, epsilon: f64) -> Result<f64> {
        let p = Self::unchecked(x, h, epsilon, 0.0)?;
        // 2Q²/(HδD) < 1  ⇔  e·log log X < log(Hδ/(2Q²))
        let lhs = (h as f64 * p.delta / (2.0 * (p.q as f64).powi(2))).ln();
        Ok(lhs / (x as f64).ln().ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcLabel {
    Major { q: u64, r: u64 },
    Minor,
}

/// Major iff `|α − r/q| ≤ β(δ)` for a reduced `r/q` with `q ≤ Q`; the
/// smallest such `q` is reported, with `r ∈ [1, q]`.
pub fn classify(alpha: f64, params: &CircleParams) -> ArcLabel {
    let a = alpha - alpha.floor();
    for q in 1..=params.q {
        let qa = q as f64 * a;
        let r = qa.round();
        if (qa - r).abs() <= params.beta * q as f64 {
            let r = r as u64;
            if q > 1 && gcd(r, q) != 1 {
                continue;
            }
            let r = if r == 0 { q } else { r };
            return ArcLabel::Major { q, r };
        }
    }
    ArcLabel::Minor
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> CircleParams {
        CircleParams::with_log_exponent(1_000_000, 10_000, 0.1, 1.0).unwrap()
    }

    #[test]
    fn parameter_derivation() {
        let p = params();
        assert!((p.delta - 1e6f64.powf(-0.1)).abs() < 1e-15);
        assert_eq!(p.q, 4);
        assert!((p.beta * 1e4 * p.delta * p.d_delta - 1.0).abs() < 1e-12);
        assert_eq!(CircleParams::new(1_000_000, 10_000, 0.3).unwrap_err().kind(), "precondition");
        let e = CircleParams::max_log_exponent(1_000_000, 10_000, 0.1).unwrap();
        assert!(CircleParams::with_log_exponent(1_000_000, 10_000, 0.1, e - 1e-6).is_ok());
        assert!(CircleParams::with_log_exponent(1_000_000, 10_000, 0.1, e + 1e-6).is_err());
    }

    #[test]
    fn classify_named_points() {
        let p = params();
        assert_eq!(classify(0.5, &p), ArcLabel::Major { q: 2, r: 1 });
        assert_eq!(classify(0.5 + 2.0 * p.beta, &p), ArcLabel::Minor);
        assert_eq!(classify(1e-9, &p), ArcLabel::Major { q: 1, r: 1 });
        assert_eq!(classify(1.0, &p), ArcLabel::Major { q: 1, r: 1 });
        assert_eq!(classify(1.25, &p), classify(0.25, &p));
    }
}
