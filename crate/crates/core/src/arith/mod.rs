//! Number-theoretic kernel: sieves, pointwise arithmetic functions,
//! Dirichlet characters, Ramanujan and Gauss sums.

pub mod cache;
mod characters;
mod functions;
mod ramanujan;
mod sieve;

pub use characters::{
    characters_mod, gauss_sum, psi_chi, DirichletCharacter, UnitGroup, CHARACTER_MODULUS_CAP,
};
pub use functions::{
    binomial, divisor_k, divisors, factorize, gcd, mobius, pointwise, totient, von_mangoldt,
    Pointwise, SmallTables,
};
pub use ramanujan::{ramanujan_sum, ramanujan_sum_by_units};
pub use sieve::{
    build_window, isqrt, sieve_primes, PrimeTable, SieveWindow, BLOCK, PRIME_LIMIT_CAP,
    WINDOW_LENGTH_CAP, WINDOW_START_CAP,
};
