//! `GBSV1` window cache format.
//!
//! Layout (all little-endian): the 5 magic bytes `GBSV1`, `u64` start,
//! `u64` length, then the arrays in order: `f64` Λ, `i8` μ, `u32` d₂,
//! `u32` d₄, `u8` primality flag.

use std::fs;
use std::path::Path;

use super::sieve::{SieveWindow, WINDOW_LENGTH_CAP};
use crate::error::{ensure, Error, Result};

pub const MAGIC: &[u8; 5] = b"GBSV1";
const HEADER: usize = 5 + 8 + 8;
const PER_ENTRY: usize = 8 + 1 + 4 + 4 + 1;

pub fn encode_window(w: &SieveWindow) -> Vec<u8> {
    let n = w.lambda.len();
    let mut out = Vec::with_capacity(HEADER + n * PER_ENTRY);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&w.start.to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for x in &w.lambda {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out.extend(w.mobius.iter().map(|&m| m as u8));
    for x in &w.d2 {
        out.extend_from_slice(&x.to_le_bytes());
    }
    for x in &w.d4 {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out.extend(w.is_prime.iter().map(|&b| b as u8));
    out
}

fn take<'a>(buf: &mut &'a [u8], n: usize) -> &'a [u8] {
    let (head, tail) = buf.split_at(n);
    *buf = tail;
    head
}

pub fn decode_window(bytes: &[u8]) -> Result<SieveWindow> {
    ensure!(bytes.len() >= HEADER, Format, "cache file shorter than its {HEADER}-byte header");
    ensure!(&bytes[..5] == MAGIC, Format, "bad magic {:?}, expected GBSV1", &bytes[..5]);
    let start = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let len = u64::from_le_bytes(bytes[13..21].try_into().unwrap());
    ensure!((1..=WINDOW_LENGTH_CAP).contains(&len), Format, "implausible window length {len}");
    let n = len as usize;
    let expected = HEADER + n * PER_ENTRY;
    ensure!(
        bytes.len() == expected,
        Format,
        "cache size {} does not match header (expected {expected} bytes)",
        bytes.len()
    );
    let mut buf = &bytes[HEADER..];
    let lambda = take(&mut buf, 8 * n)
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let mobius: Vec<i8> = take(&mut buf, n).iter().map(|&b| b as i8).collect();
    ensure!(mobius.iter().all(|m| (-1..=1).contains(m)), Format, "μ entry outside {{-1, 0, 1}}");
    let d2 = take(&mut buf, 4 * n)
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let d4 = take(&mut buf, 4 * n)
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let flags = take(&mut buf, n);
    ensure!(flags.iter().all(|&b| b <= 1), Format, "primality flag outside {{0, 1}}");
    let is_prime = flags.iter().map(|&b| b == 1).collect();
    Ok(SieveWindow { start, lambda, mobius, d2, d4, is_prime })
}

pub fn write_window(w: &SieveWindow, path: &Path) -> Result<()> {
    fs::write(path, encode_window(w)).map_err(Error::from)
}

pub fn read_window(path: &Path) -> Result<SieveWindow> {
    decode_window(&fs::read(path)?)
}
