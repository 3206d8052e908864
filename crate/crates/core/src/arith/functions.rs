//! Pointwise arithmetic functions by trial factorization, plus small
//! linear-sieve tables.

use num_integer::Integer;

use crate::error::{ensure, Result};

/// Prime factorization `[(p, e)]`, ascending in `p`. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn von_mangoldt(n: u64) -> f64 {
    let f = factorize(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}

pub fn mobius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// d_k(n): number of ordered k-tuples of positive integers with product n.
pub fn divisor_k(k: u32, n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(_, e)| binomial(e as u64 + k as u64 - 1, k as u64 - 1))
        .product()
}

/// Selector for [`pointwise`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pointwise {
    VonMangoldt,
    Mobius,
    Totient,
    /// d_k for 2 ≤ k ≤ 8.
    Divisor(u32),
}

/// Evaluates one of the arithmetic functions at `n ≥ 1`.
pub fn pointwise(kind: Pointwise, n: u64) -> Result<f64> {
    ensure!(n >= 1, Domain, "arithmetic functions are defined for n ≥ 1, got {n}");
    Ok(match kind {
        Pointwise::VonMangoldt => von_mangoldt(n),
        Pointwise::Mobius => mobius(n) as f64,
        Pointwise::Totient => totient(n) as f64,
        Pointwise::Divisor(k) => {
            ensure!((2..=8).contains(&k), Domain, "d_k requires 2 ≤ k ≤ 8, got k = {k}");
            divisor_k(k, n) as f64
        }
    })
}

/// Smallest-prime-factor, μ and φ tables on `0..=n` from one linear sieve.
#[derive(Debug, Clone)]
pub struct SmallTables {
    pub spf: Vec<u32>,
    pub mobius: Vec<i8>,
    pub totient: Vec<u64>,
    pub primes: Vec<u64>,
}

impl SmallTables {
    pub fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        let mut mobius = vec![0i8; n + 1];
        let mut totient = vec![0u64; n + 1];
        let mut primes = Vec::new();
        if n >= 1 {
            mobius[1] = 1;
            totient[1] = 1;
        }
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mobius[i] = -1;
                totient[i] = i as u64 - 1;
                primes.push(i as u64);
            }
            for &p in &primes {
                let p = p as usize;
                if p > spf[i] as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
                if p == spf[i] as usize {
                    mobius[i * p] = 0;
                    totient[i * p] = totient[i] * p as u64;
                } else {
                    mobius[i * p] = -mobius[i];
                    totient[i * p] = totient[i] * (p as u64 - 1);
                }
            }
        }
        SmallTables { spf, mobius, totient, primes }
    }

    /// d₃ values on `0..=n` (entry 0 is 0).
    pub fn d3(&self) -> Vec<u64> {
        let n = self.spf.len() - 1;
        let mut out = vec![0u64; n + 1];
        if n >= 1 {
            out[1] = 1;
        }
        for i in 2..=n {
            let p = self.spf[i] as usize;
            let mut m = i;
            let mut e = 0u64;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out[i] = out[m] * binomial(e + 2, 2);
        }
        out
    }
}
