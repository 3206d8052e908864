//! Dirichlet characters modulo q.
//!
//! The unit group (ℤ/qℤ)* is split by CRT into prime-power components. Odd
//! prime powers are cyclic (one primitive root each); `4` is cyclic of order
//! two; `2^e` with `e ≥ 3` is `⟨−1⟩ × ⟨5⟩`. Each component keeps a discrete-log
//! table, and a character is an index vector over all cyclic factors. Values
//! are stored as exact phases `k / φ(q)`, so multiplicativity and orthogonality
//! are checked in integers before any floating point is involved.

use std::sync::Arc;

use num_complex::Complex64;

use super::functions::{factorize, gcd, totient};
use super::sieve::sieve_primes;
use crate::error::{ensure, Result};
use crate::scalar::{e_ratio, pairwise_sum_c};

/// Largest modulus accepted by [`characters_mod`].
pub const CHARACTER_MODULUS_CAP: u64 = 100_000;

#[derive(Debug, Clone)]
struct CyclicFactor {
    order: u64,
    /// φ(q) / order
    weight: u64,
}

#[derive(Debug, Clone)]
struct Component {
    prime: u64,
    exp: u32,
    modulus: u64,
    /// Index range into the group's flattened factor list.
    first_factor: usize,
    factors: usize,
    /// Discrete logs of each residue mod `modulus`; `None` on non-units.
    logs: Vec<Option<[u64; 2]>>,
}

/// The unit group mod q with its discrete-log tables.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    phi: u64,
    factors: Vec<CyclicFactor>,
    components: Vec<Component>,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let pm1 = p - 1;
    let qs: Vec<u64> = factorize(pm1).into_iter().map(|(r, _)| r).collect();
    let mut g = 2u64;
    while p > 2 && !qs.iter().all(|&r| pow_mod(g, pm1 / r, p) != 1) {
        g += 1;
    }
    if p == 2 {
        g = 1;
    }
    if e >= 2 && pow_mod(g, pm1, p * p) == 1 {
        g += p;
    }
    g
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self> {
        ensure!(q >= 1, Domain, "modulus must be ≥ 1");
        ensure!(q <= CHARACTER_MODULUS_CAP, Resource, "modulus {q} exceeds cap {CHARACTER_MODULUS_CAP}");
        let phi = totient(q);
        let mut factors = Vec::new();
        let mut components = Vec::new();
        for (p, e) in factorize(q) {
            let pe = p.pow(e);
            let mut logs = vec![None; pe as usize];
            let first = factors.len();
            if p == 2 {
                match e {
                    1 => {
                        logs[1] = Some([0, 0]);
                    }
                    2 => {
                        factors.push(CyclicFactor { order: 2, weight: phi / 2 });
                        logs[1] = Some([0, 0]);
                        logs[3] = Some([1, 0]);
                    }
                    _ => {
                        let ord5 = pe / 4;
                        factors.push(CyclicFactor { order: 2, weight: phi / 2 });
                        factors.push(CyclicFactor { order: ord5, weight: phi / ord5 });
                        let mut x = 1u64;
                        for k in 0..ord5 {
                            logs[x as usize] = Some([0, k]);
                            logs[(pe - x) as usize] = Some([1, k]);
                            x = x * 5 % pe;
                        }
                    }
                }
            } else {
                let order = pe / p * (p - 1);
                factors.push(CyclicFactor { order, weight: phi / order });
                let g = primitive_root_prime_power(p, e);
                let mut x = 1u64;
                for k in 0..order {
                    logs[x as usize] = Some([k, 0]);
                    x = (x as u128 * g as u128 % pe as u128) as u64;
                }
            }
            components.push(Component {
                prime: p,
                exp: e,
                modulus: pe,
                first_factor: first,
                factors: factors.len() - first,
                logs,
            });
        }
        Ok(UnitGroup { modulus: q, phi, factors, components })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// Orders of the cyclic factors, in index order.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    /// Phase numerator (mod φ(q)) of the character with `indices` at `n`, or
    /// `None` when `gcd(n, q) > 1`.
    fn phase(&self, indices: &[u64], n: i64) -> Option<u64> {
        let mut acc: u128 = 0;
        for c in &self.components {
            let r = n.rem_euclid(c.modulus as i64) as usize;
            let logs = c.logs[r]?;
            for j in 0..c.factors {
                let f = &self.factors[c.first_factor + j];
                acc += indices[c.first_factor + j] as u128 * logs[j] as u128 * f.weight as u128;
            }
        }
        Some((acc % self.phi as u128) as u64)
    }

    fn conductor(&self, indices: &[u64]) -> u64 {
        let mut cond = 1u64;
        for c in &self.components {
            let idx = &indices[c.first_factor..c.first_factor + c.factors];
            let f = if c.prime == 2 {
                match c.exp {
                    1 => 0,
                    2 => {
                        if idx[0] == 0 {
                            0
                        } else {
                            2
                        }
                    }
                    e => {
                        let (a, b) = (idx[0], idx[1]);
                        if b == 0 {
                            if a == 0 {
                                0
                            } else {
                                2
                            }
                        } else {
                            let ord5 = 1u64 << (e - 2);
                            (3..=e).find(|&f| (b << (f - 2)) % ord5 == 0).unwrap_or(e)
                        }
                    }
                }
            } else {
                let j = idx[0];
                if j == 0 {
                    0
                } else {
                    let p = c.prime;
                    let order = c.modulus / p * (p - 1);
                    (1..=c.exp)
                        .find(|&f| (j as u128 * (p.pow(f - 1) * (p - 1)) as u128).is_multiple_of(order as u128))
                        .unwrap_or(c.exp)
                }
            };
            cond *= c.prime.pow(f);
        }
        cond
    }
}

/// A Dirichlet character mod q.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    indices: Vec<u64>,
    conductor: u64,
}

impl DirichletCharacter {
    /// The principal character mod q.
    pub fn principal(q: u64) -> Result<Self> {
        let group = Arc::new(UnitGroup::new(q)?);
        let indices = vec![0; group.factors.len()];
        Ok(DirichletCharacter { group, indices, conductor: 1 })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn phi(&self) -> u64 {
        self.group.phi
    }

    /// Index of this character along each cyclic factor of the unit group.
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn is_principal(&self) -> bool {
        self.indices.iter().all(|&i| i == 0)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    /// χ(n) = e(k/φ(q)) as the exact numerator k, or `None` off the units.
    pub fn phase(&self, n: i64) -> Option<u64> {
        self.group.phase(&self.indices, n)
    }

    /// χ(n); zero when `gcd(n, q) > 1`.
    pub fn value(&self, n: i64) -> Complex64 {
        match self.phase(n) {
            Some(k) => e_ratio(k as i64, self.group.phi),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Values on residues `0..q`.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.group.modulus as i64).map(|n| self.value(n)).collect()
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.group
            .factors
            .iter()
            .zip(&self.indices)
            .map(|(f, &i)| f.order / gcd(f.order, i))
            .fold(1, num_integer::lcm)
    }
}

/// All φ(q) characters mod q; the principal character comes first.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroup::new(q)?);
    let orders = group.factor_orders();
    let mut out = Vec::with_capacity(group.phi as usize);
    let mut idx = vec![0u64; orders.len()];
    loop {
        let conductor = group.conductor(&idx);
        out.push(DirichletCharacter { group: Arc::clone(&group), indices: idx.clone(), conductor });
        // mixed-radix increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < orders[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// τ(χ) = Σ_{a mod q} χ(a) e(a/q), each term evaluated as a single exact
/// root of unity `e((k·q + a·φ) / (φ·q))`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    let phi = chi.phi();
    let den = phi * q;
    let terms: Vec<Complex64> = (1..=q as i64)
        .filter_map(|a| chi.phase(a).map(|k| e_ratio((k * q + a as u64 * phi) as i64, den)))
        .collect();
    pairwise_sum_c(&terms)
}

/// ψ(x, χ) = Σ_{n ≤ x} Λ(n) χ(n) by direct summation over prime powers.
pub fn psi_chi(x: u64, chi: &DirichletCharacter) -> Result<Complex64> {
    let primes = sieve_primes(x)?;
    let mut terms = Vec::new();
    for p in primes.iter() {
        let lp = (p as f64).ln();
        let mut pk = p;
        loop {
            terms.push(chi.value(pk as i64) * lp);
            match pk.checked_mul(p) {
                Some(n) if n <= x => pk = n,
                _ => break,
            }
        }
    }
    Ok(pairwise_sum_c(&terms))
}
