use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::HalfInt;

/// Highest weight `(m_{1,n}, …, m_{N,n})`, `N = ⌊n/2⌋`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight {
    pub n: u32,
    pub m: Vec<HalfInt>,
}

impl HighestWeight {
    /// Builds a weight without checking dominance (see [`validate_weight`]).
    pub fn new(n: u32, m: Vec<HalfInt>) -> Self {
        HighestWeight { n, m }
    }

    /// Builds a weight and rejects it unless it labels a finite-dimensional irrep.
    pub fn checked(n: u32, m: Vec<HalfInt>) -> Result<Self> {
        let hw = HighestWeight::new(n, m);
        if n < 2 {
            return Err(Error::InvalidWeight(format!("n must be at least 2, got {n}")));
        }
        if hw.m.len() != (n / 2) as usize {
            return Err(Error::InvalidWeight(format!("n = {n} needs {} entries, got {}", n / 2, hw.m.len())));
        }
        if !validate_weight(&hw) {
            return Err(Error::InvalidWeight(format!("{hw} fails the dominance conditions for n = {n}")));
        }
        Ok(hw)
    }

    /// Parses comma-separated exact rationals, e.g. `"3/2,1/2"`.
    pub fn parse(n: u32, text: &str) -> Result<Self> {
        let m = text
            .split(',')
            .map(|s| s.trim().parse::<HalfInt>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidWeight(format!("{text:?}: {e}")))?;
        HighestWeight::checked(n, m)
    }

    /// `N = ⌊n/2⌋`.
    pub fn rank(&self) -> usize {
        (self.n / 2) as usize
    }

    pub fn is_trivial(&self) -> bool {
        self.m.iter().all(|x| x.is_zero())
    }
}

/// Parity-uniform entries plus the dominance conditions of so_n.
pub fn validate_weight(hw: &HighestWeight) -> bool {
    let m = &hw.m;
    if hw.n < 2 || m.len() != (hw.n / 2) as usize {
        return false;
    }
    if m.windows(2).any(|w| !w[0].same_parity(w[1])) {
        return false;
    }
    let last = m.len() - 1;
    if m[..last].windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    if hw.n.is_multiple_of(2) {
        last == 0 || m[last - 1] >= m[last].abs()
    } else {
        m[last] >= m[last].abs() && (last == 0 || m[last - 1] >= m[last])
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "so{}{}", self.n, self)
    }
}

/// All dominant weights for `n` with `|entries| ≤ max`, integer and
/// half-integer, in ascending order.
pub fn dominant_weights(n: u32, max: HalfInt) -> Vec<HighestWeight> {
    let rank = (n / 2) as usize;
    let mut out = Vec::new();
    for half in [false, true] {
        let start = if half { 1 } else { 0 };
        let lim = max.twice();
        let values: Vec<HalfInt> = (-lim..=lim).filter(|t| (t - start) % 2 == 0).map(HalfInt::from_twice).collect();
        let mut acc = Vec::with_capacity(rank);
        fill(n, rank, &values, &mut acc, &mut out);
    }
    out.sort();
    out
}

fn fill(n: u32, rank: usize, values: &[HalfInt], acc: &mut Vec<HalfInt>, out: &mut Vec<HighestWeight>) {
    if acc.len() == rank {
        let hw = HighestWeight::new(n, acc.clone());
        if validate_weight(&hw) {
            out.push(hw);
        }
        return;
    }
    for &v in values {
        if acc.last().is_some_and(|&prev| v > prev) {
            continue;
        }
        acc.push(v);
        fill(n, rank, values, acc, out);
        acc.pop();
    }
}
