use std::io::Write;

use num_rational::Ratio;

use super::CircleParams;
use crate::error::{ensure, Result};

pub const FAREY_Q_CAP: u64 = 10_000;

/// The arc of the Farey dissection of order Q around `r/q`.
///
/// Centres run over the reduced fractions in `[1/Q, 1]`; endpoints are the
/// mediants with the neighbouring fractions, so the arcs tile the unit-length
/// interval `[1/(Q+1), 1 + 1/(Q+1)]`, a fundamental domain of the circle
/// equal to `[1/Q, 1 + 1/Q]` modulo 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FareyArc {
    pub q: i64,
    pub r: i64,
    pub left: Ratio<i64>,
    pub right: Ratio<i64>,
}

impl FareyArc {
    pub fn center(&self) -> Ratio<i64> {
        Ratio::new_raw(self.r, self.q)
    }

    pub fn length(&self) -> Ratio<i64> {
        self.right - self.left
    }

    /// `[r/q − β(δ), r/q + β(δ)]`.
    pub fn major_window(&self, params: &CircleParams) -> (f64, f64) {
        let c = self.r as f64 / self.q as f64;
        (c - params.beta, c + params.beta)
    }
}

/// Reduced fractions `r/q` in `[0, 1]` with `q ≤ Q`, ascending.
pub fn farey_fractions(order: u64) -> Result<Vec<(i64, i64)>> {
    ensure!((1..=FAREY_Q_CAP).contains(&order), Precondition, "Farey order must lie in [1, {FAREY_Q_CAP}], got {order}");
    let n = order as i64;
    let mut out = vec![(0, 1)];
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, n);
    while c <= d {
        out.push((c, d));
        let k = (n + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    Ok(out)
}

pub fn farey_dissection(order: u64) -> Result<Vec<FareyArc>> {
    let fr = farey_fractions(order)?;
    let n = order as i64;
    // neighbours: 0/1 before 1/Q, and 1 + 1/Q after 1/1
    let mut seq: Vec<(i64, i64)> = fr.clone();
    seq.push((n + 1, n));
    let mut arcs = Vec::with_capacity(fr.len() - 1);
    for i in 1..seq.len() - 1 {
        let (pr, pq) = seq[i - 1];
        let (r, q) = seq[i];
        let (nr, nq) = seq[i + 1];
        arcs.push(FareyArc { q, r, left: Ratio::new(pr + r, pq + q), right: Ratio::new(r + nr, q + nq) });
    }
    Ok(arcs)
}

/// Writes `q,r,left,right,major_left,major_right` rows.
pub fn write_arcs_csv<W: Write>(arcs: &[FareyArc], params: &CircleParams, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["q", "r", "left", "right", "major_left", "major_right"])?;
    for a in arcs {
        let (ml, mr) = a.major_window(params);
        let f = |x: Ratio<i64>| (*x.numer() as f64 / *x.denom() as f64).to_string();
        w.write_record([a.q.to_string(), a.r.to_string(), f(a.left), f(a.right), ml.to_string(), mr.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let a1 = farey_dissection(1).unwrap();
        assert_eq!(a1.len(), 1);
        assert_eq!((a1[0].r, a1[0].q), (1, 1));
        assert_eq!(a1[0].length(), Ratio::from_integer(1));
        let a2 = farey_dissection(2).unwrap();
        let centres: Vec<_> = a2.iter().map(|a| (a.r, a.q)).collect();
        assert_eq!(centres, vec![(1, 2), (1, 1)]);
        assert_eq!(a2[0].left, Ratio::new(1, 3));
        assert_eq!(a2[0].right, Ratio::new(2, 3));
    }

    #[test]
    fn counts_follow_totient_sum() {
        let arcs = farey_dissection(30).unwrap();
        let want: u64 = (1..=30).map(crate::arith::totient).sum();
        assert_eq!(arcs.len() as u64, want);
        assert!(farey_dissection(0).is_err());
        assert!(farey_dissection(FAREY_Q_CAP + 1).is_err());
    }
}
