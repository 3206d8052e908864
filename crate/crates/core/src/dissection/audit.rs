use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::scalar::{dist_to_int, e, frac_mul, pairwise_sum_c};

/// Largest `Σ_{m ≤ A} (H/m + 1)` evaluated by [`typei_audit`].
pub const AUDIT_WORK_CAP: u64 = 200_000_000;

/// The smooth factor of a Type-I convolution `α ∗ β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaKind {
    /// `β(k) = 1`
    ConstantOne,
    /// `β(k) = (log k)^l / (log X)^l`
    LogPower { l: u32 },
}

impl BetaKind {
    fn eval(&self, k: u64, log_x: f64) -> f64 {
        match *self {
            BetaKind::ConstantOne => 1.0,
            BetaKind::LogPower { l } => ((k as f64).ln() / log_x).powi(l as i32),
        }
    }
}

/// Constants standing in for the implied constants of the inverse theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    /// Search range `q ≤ c1·D(δ)⁻¹`.
    pub c1: f64,
    /// Accept `‖qα‖ ≤ c2·q/(HδD(δ))`.
    pub c2: f64,
    /// Exponent `e` in `D(δ) = (log X)^{−e}`.
    pub log_exponent: f64,
    /// The degenerate branch is taken when `H ≤ δ^{−degenerate_power}·A`.
    pub degenerate_power: i32,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { c1: 10.0, c2: 10.0, log_exponent: super::DEFAULT_LOG_EXPONENT, degenerate_power: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum AuditBranch {
    /// `H ≤ δ^{−k} A`: nothing to check.
    Degenerate,
    /// `|Σ f(n) e(αn)| < δH`.
    BelowThreshold,
    Witness { q: u64, dist: f64 },
    /// Large sum with no `q ≤ c1·D(δ)⁻¹` satisfying the bound.
    NoWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditVerdict {
    pub abs_sum: f64,
    pub threshold: f64,
    pub a: u64,
    pub d_delta: f64,
    pub config: AuditConfig,
    #[serde(flatten)]
    pub branch: AuditBranch,
}

/// Checks the inverse theorem for the Type-I sum `f = α ∗ β` on
/// `[X, X + H]` at frequency `alpha`.
///
/// `coeffs` lists `(m, α(m))` with `m ≥ 1`; its largest `m` is `A`.
pub fn typei_audit(
    coeffs: &[(u64, f64)],
    beta_kind: BetaKind,
    x: u64,
    h: u64,
    delta: f64,
    alpha: f64,
    config: &AuditConfig,
) -> Result<AuditVerdict> {
    ensure!(!coeffs.is_empty(), Domain, "empty coefficient list");
    ensure!(delta > 0.0 && delta < 1.0, Domain, "δ must lie in (0, 1), got {delta}");
    ensure!(x >= 3 && h >= 1, Precondition, "need X ≥ 3 and H ≥ 1");
    let mut sorted = coeffs.to_vec();
    sorted.sort_by_key(|&(m, _)| m);
    ensure!(sorted[0].0 >= 1, Domain, "coefficient support must be in [1, A]");
    ensure!(sorted.windows(2).all(|w| w[0].0 != w[1].0), Domain, "repeated coefficient index");
    let mut energy = 0.0;
    for &(m, c) in &sorted {
        energy += c * c;
        ensure!(
            energy <= m as f64 / delta * (1.0 + 1e-12),
            Domain,
            "Σ_{{n ≤ {m}}} |α(n)|² = {energy} exceeds N/δ = {}",
            m as f64 / delta
        );
    }
    let a = sorted.last().unwrap().0;
    let hi = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
    let work: u64 = sorted.iter().map(|&(m, _)| h / m + 1).sum();
    ensure!(work <= AUDIT_WORK_CAP, Resource, "Type-I evaluation needs {work} updates, over {AUDIT_WORK_CAP}");

    let log_x = (x as f64).ln();
    let d_delta = log_x.powf(-config.log_exponent);
    let threshold = delta * h as f64;
    let mut f = vec![0.0; (h + 1) as usize];
    for &(m, c) in &sorted {
        let mut n = x.div_ceil(m) * m;
        while n <= hi {
            f[(n - x) as usize] += c * beta_kind.eval(n / m, log_x);
            n += m;
        }
    }
    let terms: Vec<_> = f.iter().enumerate().map(|(i, &w)| e(frac_mul(x + i as u64, alpha)) * w).collect();
    let abs_sum = pairwise_sum_c(&terms).norm();
    let verdict = |branch| AuditVerdict { abs_sum, threshold, a, d_delta, config: *config, branch };

    if h as f64 <= delta.powi(-config.degenerate_power) * a as f64 {
        return Ok(verdict(AuditBranch::Degenerate));
    }
    if abs_sum < threshold {
        return Ok(verdict(AuditBranch::BelowThreshold));
    }
    let qmax = (config.c1 / d_delta).floor();
    ensure!(qmax <= 1e8, Resource, "witness search up to {qmax:.3e} is too large");
    let bound = config.c2 / (h as f64 * delta * d_delta);
    for q in 1..=(qmax as u64).max(1) {
        let dist = dist_to_int(frac_mul(q, alpha));
        if dist <= bound * q as f64 {
            return Ok(verdict(AuditBranch::Witness { q, dist }));
        }
    }
    Ok(verdict(AuditBranch::NoWitness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AuditConfig {
        AuditConfig { log_exponent: 1.0, ..AuditConfig::default() }
    }

    #[test]
    fn constant_function_at_a_rational() {
        let v = typei_audit(&[(1, 1.0)], BetaKind::ConstantOne, 100_000, 10_000, 0.25, 1.0 / 3.0, &cfg()).unwrap();
        assert!(v.abs_sum > 0.0);
        // e(n/3) over a full set of residues nearly cancels
        assert_eq!(v.branch, AuditBranch::BelowThreshold);
        let v = typei_audit(&[(1, 1.0)], BetaKind::ConstantOne, 100_000, 10_000, 0.25, 0.0, &cfg()).unwrap();
        assert_eq!(v.branch, AuditBranch::Witness { q: 1, dist: 0.0 });
        // f = indicator of multiples of 3 resonates at 1/3
        let v = typei_audit(&[(3, 1.0)], BetaKind::ConstantOne, 100_000, 10_000, 0.25, 1.0 / 3.0, &cfg()).unwrap();
        assert!(v.abs_sum > 3000.0);
        assert!(matches!(v.branch, AuditBranch::Witness { q: 3, .. }), "{v:?}");
    }

    #[test]
    fn degenerate_branch_skips_search() {
        let coeffs: Vec<_> = (1..=200).map(|m| (m, 1.0)).collect();
        let v = typei_audit(&coeffs, BetaKind::ConstantOne, 100_000, 10_000, 0.25, 0.1, &cfg()).unwrap();
        assert_eq!(v.branch, AuditBranch::Degenerate);
    }

    #[test]
    fn energy_condition_enforced() {
        let e = typei_audit(&[(1, 3.0)], BetaKind::ConstantOne, 1000, 100, 0.25, 0.1, &cfg()).unwrap_err();
        assert_eq!(e.kind(), "domain");
    }
}
