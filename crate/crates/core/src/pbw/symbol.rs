use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::Sign;

/// A generator `I^±_{k,l}` with `k > l ≥ 1`.
///
/// Field order gives the derived ordering: by upper index, then lower index,
/// which is the ordering of ordered monomials. Basic generators (`k = l + 1`)
/// always carry `Sign::Plus`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenSymbol {
    upper: u32,
    lower: u32,
    sign: Sign,
}

impl GenSymbol {
    pub fn new(sign: Sign, upper: u32, lower: u32) -> Result<Self> {
        if lower < 1 || upper <= lower {
            return Err(Error::IndexOutOfRange(format!("generator I({upper},{lower}) needs 1 <= l < k")));
        }
        let sign = if upper == lower + 1 { Sign::Plus } else { sign };
        Ok(GenSymbol { upper, lower, sign })
    }

    /// The basic generator `I_{j+1,j}`.
    pub fn basic(j: u32) -> Self {
        GenSymbol::new(Sign::Plus, j + 1, j).expect("j >= 1")
    }

    pub fn plus(upper: u32, lower: u32) -> Self {
        GenSymbol::new(Sign::Plus, upper, lower).expect("valid indices")
    }

    pub fn minus(upper: u32, lower: u32) -> Self {
        GenSymbol::new(Sign::Minus, upper, lower).expect("valid indices")
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn upper(self) -> u32 {
        self.upper
    }

    pub fn lower(self) -> u32 {
        self.lower
    }

    pub fn is_basic(self) -> bool {
        self.upper == self.lower + 1
    }

    /// Same indices, opposite sign (a no-op on basic generators).
    pub fn flipped(self) -> Self {
        GenSymbol::new(self.sign.flip(), self.upper, self.lower).expect("valid")
    }

    /// Strict index order `≺`: upper first, then lower.
    pub fn precedes(self, other: GenSymbol) -> bool {
        (self.upper, self.lower) < (other.upper, other.lower)
    }
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}({},{})", self.sign.symbol(), self.upper, self.lower)
    }
}

impl fmt::Debug for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A product of generators; repeated symbols are stored explicitly.
///
/// Ordered degree-lexicographically: shorter words first, then symbol by symbol.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<GenSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[GenSymbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// All symbols `I^+` and indices non-decreasing under `≺`.
    pub fn is_ordered(&self) -> bool {
        self.0.iter().all(|s| s.sign() == Sign::Plus) && self.0.windows(2).all(|w| !w[1].precedes(w[0]))
    }

    /// Position of the leftmost adjacent pair `a·b` with `b ≺ a`.
    pub fn first_disorder(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[1].precedes(w[0]))
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|s| s.upper()).max().unwrap_or(0)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Symbols separated by spaces; runs of a repeated symbol as `^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let s = self.0[i];
            let run = self.0[i..].iter().take_while(|&&t| t == s).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{s}^{run}")?;
            } else {
                write!(f, "{s}")?;
            }
            i += run;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}
