use std::io::Write;

use serde::Serialize;

use super::{DigitSystem, RestrictedSet};
use crate::arith::gcd;
use crate::error::{ensure, Result};

pub const AP_QMAX_CAP: u64 = 10_000;
pub const AP_X_CAP: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApRow {
    pub q: u64,
    /// max over a of | #{n ≡ a (q)} − |set|/q |
    pub max_a_discrepancy: f64,
    /// gcd(q, g(g−1)) = 1
    pub coprime: bool,
}

/// Equidistribution of `[1, X]*` in residue classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApReport {
    pub base: u64,
    pub forbidden: u64,
    pub x: u64,
    pub qmax: u64,
    pub total: u64,
    pub rows: Vec<ApRow>,
    /// Σ of `max_a_discrepancy` over rows with `coprime`.
    pub coprime_sum: f64,
    /// `coprime_sum / total`.
    pub normalized: f64,
}

impl ApReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["q", "max_a_discrepancy"])?;
        for r in &self.rows {
            w.write_record([r.q.to_string(), r.max_a_discrepancy.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Per-modulus residue discrepancy of `[1, X]*` for `q ≤ qmax`.
pub fn ap_discrepancy(system: DigitSystem, x: u64, qmax: u64) -> Result<ApReport> {
    ensure!(qmax >= 1 && x >= 1, Precondition, "need Qmax ≥ 1 and X ≥ 1");
    ensure!(qmax <= AP_QMAX_CAP, Resource, "Qmax = {qmax} exceeds {AP_QMAX_CAP}");
    ensure!(x <= AP_X_CAP, Resource, "X = {x} exceeds {AP_X_CAP}");
    let set = RestrictedSet::new(system, 1, x)?;
    let total = set.count();
    let g = system.base();
    let mut rows = Vec::with_capacity(qmax as usize);
    for q in 1..=qmax {
        let counts = set.residue_counts(q)?;
        let mean = total as f64 / q as f64;
        let max_a_discrepancy = counts.iter().map(|&c| (c as f64 - mean).abs()).fold(0.0, f64::max);
        rows.push(ApRow { q, max_a_discrepancy, coprime: gcd(q, g * (g - 1)) == 1 });
    }
    let coprime_sum: f64 = rows.iter().filter(|r| r.coprime).map(|r| r.max_a_discrepancy).sum();
    let normalized = if total == 0 { 0.0 } else { coprime_sum / total as f64 };
    Ok(ApReport { base: g, forbidden: system.forbidden(), x, qmax, total, rows, coprime_sum, normalized })
}
