use crate::error::{ensure, Error, Result};

/// Largest `limit` accepted by [`sieve_primes`].
pub const PRIME_LIMIT_CAP: u64 = 1_000_000_000;
/// Windows may not start beyond this point.
pub const WINDOW_START_CAP: u64 = 1_000_000_000_000;
/// Largest window length accepted by [`build_window`].
pub const WINDOW_LENGTH_CAP: u64 = 200_000_000;
/// Segment size for the windowed sieves.
pub const BLOCK: usize = 1 << 16;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    /// Membership by binary search; only meaningful for `n ≤ limit`.
    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Segmented sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    ensure!(limit <= PRIME_LIMIT_CAP, Resource, "prime limit {limit} exceeds cap {PRIME_LIMIT_CAP}");
    let root = isqrt(limit);
    let base = simple_sieve(root);
    if limit <= root.max(BLOCK as u64) {
        return Ok(PrimeTable { limit, primes: simple_sieve(limit) });
    }
    let mut primes = base.clone();
    let mut lo = root + 1;
    let mut mark = vec![false; BLOCK];
    while lo <= limit {
        let hi = (lo + BLOCK as u64 - 1).min(limit);
        let span = (hi - lo + 1) as usize;
        mark[..span].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            if m < p * p {
                m = p * p;
            }
            while m <= hi {
                mark[(m - lo) as usize] = true;
                m += p;
            }
        }
        primes.extend((0..span).filter(|&i| !mark[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    Ok(PrimeTable { limit, primes })
}

/// Arithmetic tables over the contiguous window `[start, start + length)`.
#[derive(Debug, Clone)]
pub struct SieveWindow {
    pub(crate) start: u64,
    pub(crate) lambda: Vec<f64>,
    pub(crate) mobius: Vec<i8>,
    pub(crate) d2: Vec<u32>,
    pub(crate) d4: Vec<u32>,
    pub(crate) is_prime: Vec<bool>,
}

impl SieveWindow {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> u64 {
        self.lambda.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Last covered integer.
    pub fn end(&self) -> u64 {
        self.start + self.len() - 1
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.start && n <= self.end()
    }

    /// True if every integer of `[lo, hi]` is in the window.
    pub fn covers(&self, lo: u64, hi: u64) -> bool {
        lo > hi || (self.contains(lo) && self.contains(hi))
    }

    pub(crate) fn require(&self, lo: u64, hi: u64) -> Result<()> {
        ensure!(
            self.covers(lo, hi),
            Domain,
            "window [{}, {}] does not cover [{lo}, {hi}]",
            self.start,
            self.end()
        );
        Ok(())
    }

    #[inline]
    fn idx(&self, n: u64) -> usize {
        assert!(self.contains(n), "{n} outside window [{}, {}]", self.start, self.end());
        (n - self.start) as usize
    }

    /// Λ(n), natural log scale. Panics outside the window.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda[self.idx(n)]
    }

    #[inline]
    pub fn mobius(&self, n: u64) -> i8 {
        self.mobius[self.idx(n)]
    }

    #[inline]
    pub fn d2(&self, n: u64) -> u32 {
        self.d2[self.idx(n)]
    }

    #[inline]
    pub fn d4(&self, n: u64) -> u32 {
        self.d4[self.idx(n)]
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        self.is_prime[self.idx(n)]
    }

    pub fn lambda_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn mobius_slice(&self) -> &[i8] {
        &self.mobius
    }

    pub fn d2_slice(&self) -> &[u32] {
        &self.d2
    }

    pub fn d4_slice(&self) -> &[u32] {
        &self.d4
    }

    pub fn is_prime_slice(&self) -> &[bool] {
        &self.is_prime
    }

    /// Σ Λ(n) over `[lo, hi]`.
    pub fn lambda_mass(&self, lo: u64, hi: u64) -> Result<f64> {
        self.require(lo, hi)?;
        if lo > hi {
            return Ok(0.0);
        }
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        Ok(crate::scalar::pairwise_sum(&self.lambda[a..=b]))
    }

    /// Field-by-field equality with floats compared by bit pattern.
    pub fn bit_eq(&self, other: &SieveWindow) -> bool {
        self.start == other.start
            && self.lambda.len() == other.lambda.len()
            && self.lambda.iter().zip(&other.lambda).all(|(a, b)| a.to_bits() == b.to_bits())
            && self.mobius == other.mobius
            && self.d2 == other.d2
            && self.d4 == other.d4
            && self.is_prime == other.is_prime
    }
}

/// C(e+3, 3): the local factor of d₄ at a prime power p^e.
#[inline]
fn d4_local(e: u32) -> u32 {
    let e = e as u64;
    ((e + 1) * (e + 2) * (e + 3) / 6) as u32
}

/// Sieves Λ, μ, d₂, d₄ and primality over `[start, start + length)`.
pub fn build_window(start: u64, length: u64) -> Result<SieveWindow> {
    ensure!(start >= 1, Domain, "window start must be ≥ 1");
    ensure!(length >= 1, Domain, "window length must be ≥ 1");
    let end = start
        .checked_add(length - 1)
        .ok_or_else(|| Error::Range(format!("window [{start}, +{length}) overflows u64")))?;
    ensure!(start <= WINDOW_START_CAP, Range, "window start {start} exceeds {WINDOW_START_CAP}");
    ensure!(length <= WINDOW_LENGTH_CAP, Resource, "window length {length} exceeds {WINDOW_LENGTH_CAP}");
    let base = simple_sieve(isqrt(end));

    let len = length as usize;
    let mut w = SieveWindow {
        start,
        lambda: vec![0.0; len],
        mobius: vec![1; len],
        d2: vec![1; len],
        d4: vec![1; len],
        is_prime: vec![false; len],
    };
    let mut rem = vec![0u64; BLOCK.min(len)];
    let mut omega = vec![0u8; BLOCK.min(len)];
    let mut last = vec![0u64; BLOCK.min(len)];

    let mut off = 0usize;
    while off < len {
        let span = BLOCK.min(len - off);
        let lo = start + off as u64;
        let hi = lo + span as u64 - 1;
        for (i, r) in rem[..span].iter_mut().enumerate() {
            *r = lo + i as u64;
        }
        omega[..span].fill(0);
        let (mob, d2, d4) = (&mut w.mobius[off..off + span], &mut w.d2[off..off + span], &mut w.d4[off..off + span]);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let i = (m - lo) as usize;
                let mut e = 0u32;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                    e += 1;
                }
                mob[i] = if e >= 2 { 0 } else { -mob[i] };
                d2[i] *= e + 1;
                d4[i] *= d4_local(e);
                omega[i] += 1;
                last[i] = p;
                m += p;
            }
        }
        for i in 0..span {
            let n = lo + i as u64;
            if rem[i] > 1 {
                mob[i] = -mob[i];
                d2[i] *= 2;
                d4[i] *= 4;
                omega[i] += 1;
                last[i] = rem[i];
            }
            if omega[i] == 1 {
                w.lambda[off + i] = (last[i] as f64).ln();
                w.is_prime[off + i] = n == last[i];
            }
        }
        off += span;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_tables() {
        assert!(sieve_primes(0).unwrap().is_empty());
        assert!(sieve_primes(1).unwrap().is_empty());
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(30).unwrap().primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn segmented_path_counts() {
        // π(10^6) = 78498
        let t = sieve_primes(1_000_000).unwrap();
        assert_eq!(t.len(), 78_498);
        assert_eq!(*t.primes().last().unwrap(), 999_983);
    }

    #[test]
    fn prime_cap_is_resource_error() {
        assert_eq!(sieve_primes(PRIME_LIMIT_CAP + 1).unwrap_err().kind(), "resource");
    }

    #[test]
    fn window_small_values() {
        let w = build_window(1, 16).unwrap();
        assert_eq!(w.lambda(8), 2f64.ln());
        assert_eq!(w.lambda(6), 0.0);
        assert_eq!(w.lambda(1), 0.0);
        assert_eq!(w.mobius(12), 0);
        assert_eq!(w.mobius(1), 1);
        assert_eq!(w.mobius(6), 1);
        assert_eq!(w.mobius(7), -1);
        assert_eq!(w.d4(6), 16);
        assert_eq!(w.d2(12), 6);
        assert!(w.is_prime(13) && !w.is_prime(9) && !w.is_prime(1));
    }

    #[test]
    fn window_errors() {
        assert_eq!(build_window(0, 5).unwrap_err().kind(), "domain");
        assert_eq!(build_window(u64::MAX, 2).unwrap_err().kind(), "range");
        assert_eq!(build_window(WINDOW_START_CAP + 1, 2).unwrap_err().kind(), "range");
    }

    #[test]
    fn window_spanning_several_blocks() {
        let w = build_window(999_000, 3 * BLOCK as u64 + 17).unwrap();
        let t = sieve_primes(w.end()).unwrap();
        let from_table: Vec<u64> = t.iter().filter(|&p| p >= w.start()).collect();
        let from_window: Vec<u64> = (w.start()..=w.end()).filter(|&n| w.is_prime(n)).collect();
        assert_eq!(from_table, from_window);
    }
}
