use num_rational::Ratio;
use serde::Serialize;

use gbseed_core::arith::{build_window, characters_mod, gauss_sum, ramanujan_sum, ramanujan_sum_by_units};
use gbseed_core::dissection::farey_dissection;
use gbseed_core::goldbach::{r_star, r_star_all};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn result(name: &str, cases: u64, max_error: f64, tolerance: f64, ok: bool, detail: String) -> CheckResult {
    CheckResult { name: name.into(), passed: ok && max_error <= tolerance, cases, max_error, tolerance, detail }
}

/// Closed form against the unit sum for `q ≤ qmax`, `|m| ≤ mmax`; the unit
/// sum must round to the same integer.
pub fn check_ramanujan(qmax: u64, mmax: i64) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut mismatches = 0u64;
    let mut cases = 0;
    for q in 1..=qmax {
        for m in -mmax..=mmax {
            let z = ramanujan_sum_by_units(q, m);
            let rounded = z.re.round();
            worst = worst.max((z.re - rounded).abs()).max(z.im.abs());
            if rounded as i64 != ramanujan_sum(q, m) {
                mismatches += 1;
            }
            cases += 1;
        }
    }
    result("ramanujan", cases, worst, 1e-6, mismatches == 0, format!("{mismatches} integer mismatches"))
}

/// `|τ(χ)| = √q` for primitive χ mod `q ≤ gauss_qmax`, and orthogonality of
/// the character table for `q ≤ orth_qmax`.
pub fn check_characters(gauss_qmax: u64, orth_qmax: u64) -> CheckResult {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut structural = 0u64;
    for q in 1..=gauss_qmax.max(orth_qmax) {
        let chars = characters_mod(q).expect("modulus within cap");
        let phi = gbseed_core::arith::totient(q) as usize;
        if chars.len() != phi || chars.iter().filter(|c| c.is_principal()).count() != 1 {
            structural += 1;
        }
        if q <= gauss_qmax {
            for chi in chars.iter().filter(|c| c.is_primitive()) {
                worst = worst.max((gauss_sum(chi).norm() - (q as f64).sqrt()).abs());
                cases += 1;
            }
        }
        if q <= orth_qmax {
            let tables: Vec<_> = chars.iter().map(|c| c.values()).collect();
            for (i, a) in tables.iter().enumerate() {
                for (j, b) in tables.iter().enumerate() {
                    let s: num_complex::Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                    let want = if i == j { phi as f64 } else { 0.0 };
                    worst = worst.max((s - want).norm());
                    cases += 1;
                }
            }
        }
    }
    result("characters", cases, worst, 1e-9, structural == 0, format!("{structural} moduli with a malformed table"))
}

/// Exact tiling and containment of the Farey arcs for every order `≤ qmax`.
pub fn check_farey(qmax: u64) -> CheckResult {
    let mut failures = 0u64;
    let mut cases = 0;
    for order in 1..=qmax {
        let arcs = farey_dissection(order).expect("order within cap");
        let n = order as i64;
        let chained = arcs.windows(2).all(|w| w[0].right == w[1].left);
        let first = arcs.first().map(|a| a.left) == Some(Ratio::new(1, n + 1));
        let last = arcs.last().map(|a| a.right) == Some(Ratio::new(n + 2, n + 1));
        let total: Ratio<i64> = arcs.iter().map(|a| a.length()).sum();
        let contained = arcs.iter().all(|a| {
            let slack = Ratio::new(1, a.q * n);
            a.left >= a.center() - slack && a.right <= a.center() + slack && a.left < a.right
        });
        if !(chained && first && last && total == Ratio::from_integer(1) && contained) {
            failures += 1;
        }
        cases += arcs.len() as u64;
    }
    result("farey", cases, failures as f64, 0.0, failures == 0, format!("{failures} orders failed"))
}

/// FFT convolution against direct `R*` at every even `m`, and the total
/// mass identity.
pub fn check_convolution(x: u64, h: u64) -> CheckResult {
    let w = build_window(1, x + h).expect("window within cap");
    let table = r_star_all(x, h, &w).expect("grid within cap");
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let (lo, hi) = table.range();
    for m in (lo..=hi).filter(|m| m % 2 == 0) {
        let d = r_star(m, x, h, &w).expect("window covers both intervals");
        worst = worst.max((table.get(m) - d).abs() / d.max(1.0));
        cases += 1;
    }
    let mass = w.lambda_mass(x - h + 1, x).unwrap() * w.lambda_mass(1, h).unwrap();
    let mass_err = (table.total() - mass).abs() / mass;
    result(
        "convolution",
        cases,
        worst.max(mass_err),
        1e-8,
        true,
        format!("grid {}, mass identity error {mass_err:.3e}", table.grid()),
    )
}

/// All exact-identity suites at their standard sizes.
pub fn verify() -> VerifyReport {
    let checks = vec![
        check_ramanujan(300, 300),
        check_characters(100, 200),
        check_farey(200),
        check_convolution(10_000, 1_000),
    ];
    VerifyReport { passed: checks.iter().all(|c| c.passed), checks }
}
