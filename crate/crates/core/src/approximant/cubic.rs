use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// `c₀ + c₁t + c₂t² + c₃t³`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Cubic<T> {
    c: [T; 4],
}

impl<T: Real> Cubic<T> {
    pub fn new(c: [T; 4]) -> Self {
        Cubic { c }
    }

    pub fn coefficients(&self) -> [T; 4] {
        self.c
    }

    pub fn degree(&self) -> Option<usize> {
        (0..4).rev().find(|&i| self.c[i] != T::zero())
    }

    pub fn eval(&self, t: T) -> T {
        ((self.c[3] * t + self.c[2]) * t + self.c[1]) * t + self.c[0]
    }

    pub fn derivative(&self) -> [T; 3] {
        [self.c[1], self.c[2] * T::lit(2.0), self.c[3] * T::lit(3.0)]
    }

    /// `max_{t ∈ [t0, t1]} |p(t)|`, from the endpoints and critical points.
    pub fn max_abs_on(&self, t0: T, t1: T) -> T {
        let mut best = self.eval(t0).abs().max(self.eval(t1).abs());
        let [b, c, a] = {
            let d = self.derivative();
            [d[1], d[0], d[2]]
        };
        // a t² + b t + c = 0
        let mut roots = Vec::new();
        if a != T::zero() {
            let disc = b * b - T::lit(4.0) * a * c;
            if disc >= T::zero() {
                let s = disc.sqrt();
                roots.push((-b + s) / (a + a));
                roots.push((-b - s) / (a + a));
            }
        } else if b != T::zero() {
            roots.push(-c / b);
        }
        for r in roots {
            if r > t0 && r < t1 {
                best = best.max(self.eval(r).abs());
            }
        }
        best
    }

    /// `∫_a^b p(log u) du` via `∫ (log u)^k du = u Σ_{i ≤ k} (−1)^{k−i} k!/i! (log u)^i`.
    pub fn integral_log(&self, a: T, b: T) -> T {
        self.log_antiderivative(b) - self.log_antiderivative(a)
    }

    fn log_antiderivative(&self, u: T) -> T {
        let l = u.ln();
        let pw = [T::one(), l, l * l, l * l * l];
        let fact = [T::one(), T::one(), T::lit(2.0), T::lit(6.0)];
        let mut total = T::zero();
        for k in 0..4 {
            if self.c[k] == T::zero() {
                continue;
            }
            let mut s = T::zero();
            for i in 0..=k {
                let sign = if (k - i) % 2 == 0 { T::one() } else { -T::one() };
                s = s + sign * fact[k] / fact[i] * pw[i];
            }
            total = total + self.c[k] * s;
        }
        total * u
    }
}
