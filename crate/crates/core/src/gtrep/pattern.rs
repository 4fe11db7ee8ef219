use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::weight::{validate_weight, HighestWeight};
use crate::error::{Error, Result};
use crate::qnum::HalfInt;

/// Gel'fand–Tsetlin pattern: rows `n, n−1, …, 2`, row `k` holding `⌊k/2⌋` entries.
///
/// The derived ordering compares rows top-down, entries left to right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GTPattern {
    n: u32,
    rows: Vec<Vec<HalfInt>>,
}

impl GTPattern {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Row `k` (`2 ≤ k ≤ n`).
    pub fn row(&self, k: u32) -> &[HalfInt] {
        &self.rows[(self.n - k) as usize]
    }

    pub fn rows(&self) -> &[Vec<HalfInt>] {
        &self.rows
    }

    /// Shifted labels of row `k`: `l_j = m_j + p − j` for `k = 2p`, and
    /// `l_j = m_j + p − j + 1` for `k = 2p + 1` (`j` one-based).
    /// Rows below 2 are empty.
    pub fn l_row(&self, k: u32) -> Vec<HalfInt> {
        if k < 2 {
            return Vec::new();
        }
        let p = (k / 2) as i64;
        let extra = (k % 2) as i64;
        self.row(k).iter().enumerate().map(|(j, &m)| m + (p - (j as i64 + 1) + extra)).collect()
    }

    /// Adds `delta` to entry `j` (zero-based) of row `k`, without validation.
    pub fn shifted(&self, k: u32, j: usize, delta: i64) -> GTPattern {
        let mut out = self.clone();
        let idx = (self.n - k) as usize;
        out.rows[idx][j] = out.rows[idx][j] + delta;
        out
    }

    /// Top row dominant and every consecutive pair of rows interlocking.
    pub fn is_valid(&self) -> bool {
        if self.rows.len() != self.n.saturating_sub(1) as usize {
            return false;
        }
        let top = HighestWeight::new(self.n, self.rows[0].clone());
        if !validate_weight(&top) {
            return false;
        }
        (3..=self.n).all(|k| {
            let ranges = child_ranges(k, self.row(k));
            let child = self.row(k - 1);
            child.len() == ranges.len()
                && child.iter().zip(&ranges).all(|(&x, &(lo, hi))| lo <= x && x <= hi && x.same_parity(hi))
        })
    }
}

impl fmt::Display for GTPattern {
    /// One row per line, top row first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", self.n as usize - i, parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GTPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}

/// Allowed `[lo, hi]` for each entry of row `k−1` given row `k`.
fn child_ranges(k: u32, top: &[HalfInt]) -> Vec<(HalfInt, HalfInt)> {
    let p = top.len();
    if k % 2 == 1 {
        // row 2p+1 → row 2p
        (0..p)
            .map(|i| {
                let lo = if i + 1 < p { top[i + 1] } else { -top[p - 1] };
                (lo, top[i])
            })
            .collect()
    } else {
        // row 2p → row 2p−1
        (0..p.saturating_sub(1))
            .map(|i| {
                let lo = if i + 2 < p { top[i + 1] } else { top[p - 1].abs() };
                (lo, top[i])
            })
            .collect()
    }
}

/// Every pattern with top row `hw`, in ascending order.
pub fn enumerate_patterns(hw: &HighestWeight) -> Result<Vec<GTPattern>> {
    if !validate_weight(hw) {
        return Err(Error::InvalidWeight(format!("{hw:?}")));
    }
    let mut out = Vec::new();
    let mut rows = vec![hw.m.clone()];
    descend(hw.n, hw.n, &mut rows, &mut out);
    out.sort();
    Ok(out)
}

fn descend(n: u32, k: u32, rows: &mut Vec<Vec<HalfInt>>, out: &mut Vec<GTPattern>) {
    if k == 2 {
        out.push(GTPattern { n, rows: rows.clone() });
        return;
    }
    let ranges = child_ranges(k, rows.last().expect("nonempty"));
    let mut child = Vec::with_capacity(ranges.len());
    fill_row(n, k, &ranges, &mut child, rows, out);
}

fn fill_row(
    n: u32,
    k: u32,
    ranges: &[(HalfInt, HalfInt)],
    child: &mut Vec<HalfInt>,
    rows: &mut Vec<Vec<HalfInt>>,
    out: &mut Vec<GTPattern>,
) {
    let i = child.len();
    if i == ranges.len() {
        rows.push(child.clone());
        descend(n, k - 1, rows, out);
        rows.pop();
        return;
    }
    let (lo, hi) = ranges[i];
    let mut x = lo;
    while x <= hi {
        child.push(x);
        fill_row(n, k, ranges, child, rows, out);
        child.pop();
        x = x + 1;
    }
}

/// Number of patterns, i.e. the dimension of the irrep.
pub fn dimension(hw: &HighestWeight) -> Result<usize> {
    enumerate_patterns(hw).map(|p| p.len())
}

/// Weyl's dimension formula for so_n, evaluated in exact integers.
///
/// With `L_i = 2(m_i + ρ_i)` and `R_i = 2ρ_i`:
/// odd `n` gives `Π_{i<j}(L_i² − L_j²)/(R_i² − R_j²) · Π L_i/R_i`,
/// even `n` the first product alone.
pub fn weyl_dimension(hw: &HighestWeight) -> Result<u64> {
    if !validate_weight(hw) {
        return Err(Error::InvalidWeight(format!("{hw:?}")));
    }
    let big_n = hw.rank() as i64;
    let odd = hw.n % 2 == 1;
    let rho: Vec<i64> = (1..=big_n).map(|i| 2 * (big_n - i) + i64::from(odd)).collect();
    let ls: Vec<i64> = hw.m.iter().zip(&rho).map(|(m, r)| m.twice() + r).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            num *= BigInt::from(ls[i] * ls[i] - ls[j] * ls[j]);
            den *= BigInt::from(rho[i] * rho[i] - rho[j] * rho[j]);
        }
        if odd {
            num *= BigInt::from(ls[i]);
            den *= BigInt::from(rho[i]);
        }
    }
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Domain(format!("Weyl formula gave {num}/{den} for {hw:?}")));
    }
    q.to_u64().ok_or_else(|| Error::Domain("dimension overflow".into()))
}
