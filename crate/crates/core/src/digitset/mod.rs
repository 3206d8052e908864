//! Missing-digit sets `[lo, hi]*`: integers whose base-g expansion avoids a
//! fixed digit b ≥ 2.
//!
//! Counting never enumerates. [`RestrictedSet::count`] walks the digits of the
//! upper bound with a tight/free split; residue counts add the prefix residue
//! mod q to the state and use a table of free-suffix residue distributions.
//! Because b ≠ 0, leading zeros are always admissible and no "started" flag
//! is needed.

mod discrepancy;
mod fourier;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

pub use discrepancy::{ap_discrepancy, ApReport, ApRow, AP_QMAX_CAP, AP_X_CAP};
pub use fourier::{
    exp_sum_by_digits, exp_sum_by_members, fourier_f, fourier_f_by_members, fourier_grid,
    l1_comparator, l1_estimate, write_fourier_csv, L1Estimate,
};

/// Largest `hi − lo` that [`RestrictedSet::members`] will enumerate.
pub const ENUMERATION_CAP: u64 = 100_000_000;
/// Largest `q · g` for the residue DP.
pub const RESIDUE_STATE_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSystem {
    base: u64,
    forbidden: u64,
}

impl DigitSystem {
    pub fn new(base: u64, forbidden: u64) -> Result<Self> {
        ensure!(base >= 3, Domain, "base must be ≥ 3, got {base}");
        ensure!(forbidden >= 2, Domain, "forbidden digit must be ≥ 2");
        ensure!(forbidden < base, Domain, "forbidden digit {forbidden} is not a base-{base} digit");
        Ok(DigitSystem { base, forbidden })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn forbidden(&self) -> u64 {
        self.forbidden
    }

    /// Base-g digits, least significant first. `digits(0)` is `[0]`.
    pub fn digits(&self, mut n: u64) -> Vec<u64> {
        let mut d = vec![n % self.base];
        n /= self.base;
        while n > 0 {
            d.push(n % self.base);
            n /= self.base;
        }
        d
    }

    pub fn admits(&self, mut n: u64) -> bool {
        loop {
            if n % self.base == self.forbidden {
                return false;
            }
            n /= self.base;
            if n == 0 {
                return true;
            }
        }
    }

    /// Smallest admissible integer ≥ n, if it fits in u64.
    pub fn next_admissible(&self, mut n: u64) -> Option<u64> {
        loop {
            // position (as a power of g) of the most significant forbidden digit
            let mut scale = 1u64;
            let mut hit = None;
            let mut m = n;
            loop {
                if m % self.base == self.forbidden {
                    hit = Some(scale);
                }
                m /= self.base;
                if m == 0 {
                    break;
                }
                scale = scale.checked_mul(self.base)?;
            }
            match hit {
                None => return Some(n),
                // bump the offending digit and zero everything below it
                Some(s) => n = (n / s).checked_add(1)?.checked_mul(s)?,
            }
        }
    }

    /// Number of admissible integers in `[0, n]`.
    fn count_upto(&self, n: u64) -> u128 {
        let g = self.base as u128;
        let ds = self.digits(n);
        let free = g - 1;
        let mut total: u128 = 0;
        for (pos, &d) in ds.iter().enumerate().rev() {
            let below = d - u64::from(self.forbidden < d);
            total += below as u128 * free.pow(pos as u32);
            if d == self.forbidden {
                return total;
            }
        }
        total + 1
    }

    /// Residue distribution mod q of admissible integers in `[0, n]`.
    fn residues_upto(&self, n: u64, q: u64, free: &[Vec<u128>], gpow: &[u64]) -> Vec<u128> {
        let qq = q as usize;
        let mut out = vec![0u128; qq];
        let ds = self.digits(n);
        let mut prefix = 0u64; // prefix value mod q
        for (pos, &d) in ds.iter().enumerate().rev() {
            for c in 0..d {
                if c == self.forbidden {
                    continue;
                }
                let base = ((prefix * self.base + c) % q) * gpow[pos] % q;
                let tbl = &free[pos];
                for (s, &cnt) in tbl.iter().enumerate() {
                    if cnt != 0 {
                        out[(base as usize + s) % qq] += cnt;
                    }
                }
            }
            if d == self.forbidden {
                return out;
            }
            prefix = (prefix * self.base + d) % q;
        }
        out[prefix as usize] += 1;
        out
    }

    /// `free[k][r]`: number of length-k admissible digit strings whose value
    /// is ≡ r (mod q); `gpow[k] = g^k mod q`.
    fn free_tables(&self, q: u64, len: usize) -> (Vec<Vec<u128>>, Vec<u64>) {
        let qq = q as usize;
        let mut gpow = vec![1 % q; len + 1];
        for k in 1..=len {
            gpow[k] = gpow[k - 1] * (self.base % q) % q;
        }
        let mut free = vec![vec![0u128; qq]];
        free[0][0 % qq] = 1;
        for k in 0..len {
            let mut next = vec![0u128; qq];
            for c in 0..self.base {
                if c == self.forbidden {
                    continue;
                }
                let shift = (c % q) * gpow[k] % q;
                for (r, &cnt) in free[k].iter().enumerate() {
                    if cnt != 0 {
                        next[(shift as usize + r) % qq] += cnt;
                    }
                }
            }
            free.push(next);
        }
        (free, gpow)
    }
}

/// `{n ∈ [lo, hi] : n has no base-g digit equal to b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedSet {
    system: DigitSystem,
    lo: u64,
    hi: u64,
}

impl RestrictedSet {
    pub fn new(system: DigitSystem, lo: u64, hi: u64) -> Result<Self> {
        ensure!(lo >= 1, Precondition, "restricted sets need lo ≥ 1");
        ensure!(lo <= hi, Precondition, "empty range [{lo}, {hi}]");
        Ok(RestrictedSet { system, lo, hi })
    }

    /// `[X, X+H]*`, i.e. the admissible `n` with `X < n ≤ X + H`.
    pub fn short_interval(system: DigitSystem, x: u64, h: u64) -> Result<Self> {
        ensure!(h >= 1, Precondition, "interval length H must be ≥ 1");
        let hi = x.checked_add(h).ok_or_else(|| Error::Range(format!("X + H overflows: {x} + {h}")))?;
        Self::new(system, x + 1, hi)
    }

    pub fn system(&self) -> DigitSystem {
        self.system
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.lo && n <= self.hi && self.system.admits(n)
    }

    /// Lazy ascending enumeration.
    pub fn members(&self) -> Result<Members> {
        ensure!(
            self.hi - self.lo <= ENUMERATION_CAP,
            Resource,
            "enumerating a range of width {} exceeds {ENUMERATION_CAP}",
            self.hi - self.lo
        );
        Ok(Members { system: self.system, next: Some(self.lo), hi: self.hi })
    }

    /// |set| by digit DP.
    pub fn count(&self) -> u64 {
        (self.system.count_upto(self.hi) - self.system.count_upto(self.lo - 1)) as u64
    }

    fn check_modulus(&self, q: u64) -> Result<()> {
        ensure!(q >= 1, Precondition, "modulus must be ≥ 1");
        ensure!(
            q.saturating_mul(self.system.base) <= RESIDUE_STATE_CAP,
            Resource,
            "residue DP with q = {q}, g = {} exceeds {RESIDUE_STATE_CAP} states",
            self.system.base
        );
        Ok(())
    }

    /// Counts of members in each residue class mod q (index = residue).
    pub fn residue_counts(&self, q: u64) -> Result<Vec<u64>> {
        self.check_modulus(q)?;
        let len = self.system.digits(self.hi).len();
        let (free, gpow) = self.system.free_tables(q, len);
        let hi = self.system.residues_upto(self.hi, q, &free, &gpow);
        let lo = self.system.residues_upto(self.lo - 1, q, &free, &gpow);
        Ok(hi.iter().zip(&lo).map(|(a, b)| (a - b) as u64).collect())
    }

    /// Members ≡ a (mod q).
    pub fn count_ap(&self, q: u64, a: u64) -> Result<u64> {
        ensure!(q >= 1 && a < q, Precondition, "residue class needs 0 ≤ a < q, got a = {a}, q = {q}");
        Ok(self.residue_counts(q)?[a as usize])
    }
}

/// Iterator returned by [`RestrictedSet::members`].
#[derive(Debug, Clone)]
pub struct Members {
    system: DigitSystem,
    next: Option<u64>,
    hi: u64,
}

impl Iterator for Members {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let n = self.system.next_admissible(self.next?)?;
        if n > self.hi {
            self.next = None;
            return None;
        }
        self.next = n.checked_add(1);
        Some(n)
    }
}
