//! q-tensor operators `J^±` and the Casimir elements built from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{GenSymbol, NCPoly, Word};
use crate::qnum::QScalar;
use crate::syntax::Sign;

/// A perfect matching of a sorted index set into `(low, high)` pairs,
/// listed by increasing `high`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(u32, u32)>,
    /// Inversion count of the flattened sequence `low₁ high₁ low₂ high₂ …`.
    pub length: usize,
}

impl Matching {
    fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_by_key(|&(_, hi)| hi);
        let flat: Vec<u32> = pairs.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
        let length = flat.iter().enumerate().map(|(i, a)| flat[i + 1..].iter().filter(|&b| b < a).count()).sum();
        Matching { pairs, length }
    }
}

/// All `(2r−1)!!` matchings of `indices`, which must be strictly increasing
/// and of even length.
pub fn matchings(indices: &[u32]) -> Result<Vec<Matching>> {
    if !indices.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("matchings need an even number of indices, got {}", indices.len())));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("indices must be strictly increasing: {indices:?}")));
    }
    let mut out = Vec::new();
    pair_up(indices, &mut Vec::new(), &mut out);
    Ok(out)
}

fn pair_up(rest: &[u32], acc: &mut Vec<(u32, u32)>, out: &mut Vec<Matching>) {
    let Some((&first, tail)) = rest.split_first() else {
        out.push(Matching::from_pairs(acc.clone()));
        return;
    };
    for i in 0..tail.len() {
        let remaining: Vec<u32> = tail.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        acc.push((first, tail[i]));
        pair_up(&remaining, acc, out);
        acc.pop();
    }
}

/// `J^±_{k₁…k_{2r}} = q^{∓r(r−1)/2} Σ_s (−q^{±1})^{ℓ(s)} Π I^±_{high,low}`.
pub fn build_j(sgn: Sign, indices: &[u32]) -> Result<NCPoly> {
    if indices.first() == Some(&0) {
        return Err(Error::IndexOutOfRange("generator indices start at 1".into()));
    }
    let r = (indices.len() / 2) as i64;
    let s = sgn.unit();
    let prefactor = QScalar::u_pow(-s * r * (r - 1));
    let mut out = NCPoly::zero();
    for m in matchings(indices)? {
        let ell = m.length as i64;
        let sign = if ell % 2 == 0 { QScalar::one() } else { QScalar::from_int(-1) };
        let c = &(&prefactor * &sign) * &QScalar::u_pow(2 * s * ell);
        let word = Word(m.pairs.iter().map(|&(lo, hi)| GenSymbol::new(sgn, hi, lo)).collect::<Result<_>>()?);
        out.add_term(word, c);
    }
    Ok(out)
}

/// Which Casimir element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CasimirKind {
    /// `C^{(2r)}_n`.
    Order(u32),
    /// `C^{(n)±}_n` for even `n`.
    Top(Sign),
}

impl CasimirKind {
    /// Short label: `C(4)`, `C(6)+`.
    pub fn label(self, n: u32) -> String {
        match self {
            CasimirKind::Order(r) => format!("C({})", 2 * r),
            CasimirKind::Top(s) => format!("C({n}){}", s.symbol()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirElement {
    pub n: u32,
    pub kind: CasimirKind,
    /// Exact constructor output, not normalized.
    pub body: NCPoly,
}

impl fmt::Display for CasimirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} = {}", self.kind.label(self.n), self.n, self.body)
    }
}

fn subsets(n: u32, size: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, size: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == size {
            out.push(acc.clone());
            return;
        }
        for k in start..=n {
            if (n - k + 1) as usize + acc.len() < size {
                break;
            }
            acc.push(k);
            rec(k + 1, n, size, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, size, &mut Vec::new(), &mut out);
    out
}

/// `C^{(2r)}_n = Σ_{k₁<…<k_{2r}} q^{Σk − r(n+1)} J^+_k J^-_k`.
pub fn build_c2r(n: u32, r: u32) -> Result<CasimirElement> {
    if r < 1 || r > n / 2 {
        return Err(Error::InvalidArgument(format!("order 2r = {} is not available for n = {n}", 2 * r)));
    }
    let mut body = NCPoly::zero();
    for subset in subsets(n, 2 * r as usize) {
        let exp = subset.iter().map(|&k| k as i64).sum::<i64>() - (r as i64) * (n as i64 + 1);
        let jp = build_j(Sign::Plus, &subset)?;
        let jm = build_j(Sign::Minus, &subset)?;
        body.add_scaled(&jp.mul(&jm), &QScalar::u_pow(2 * exp));
    }
    Ok(CasimirElement { n, kind: CasimirKind::Order(r), body })
}

/// `C^{(n)±}_n = J^±_{1,2,…,n}` for even `n`.
pub fn build_ctop(n: u32, sgn: Sign) -> Result<CasimirElement> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(Error::InvalidArgument(format!("C^(n)± exists only for even n, got n = {n}")));
    }
    let indices: Vec<u32> = (1..=n).collect();
    Ok(CasimirElement { n, kind: CasimirKind::Top(sgn), body: build_j(sgn, &indices)? })
}

pub fn build(n: u32, kind: CasimirKind) -> Result<CasimirElement> {
    match kind {
        CasimirKind::Order(r) => build_c2r(n, r),
        CasimirKind::Top(s) => build_ctop(n, s),
    }
}

/// `C^{(2r)}_n` for `r = 1..⌊(n−1)/2⌋`, plus `C^{(n)+}_n` for even `n`.
pub fn casimir_generating_set(n: u32) -> Result<Vec<CasimirElement>> {
    let mut out = (1..=n.saturating_sub(1) / 2).map(|r| build_c2r(n, r)).collect::<Result<Vec<_>>>()?;
    if n.is_multiple_of(2) && n >= 2 {
        out.push(build_ctop(n, Sign::Plus)?);
    }
    Ok(out)
}

/// Every Casimir kind for `n`: all orders `2r ≤ n` and, for even
/// `n`, both top elements.
pub fn all_kinds(n: u32) -> Vec<CasimirKind> {
    let mut out: Vec<CasimirKind> = (1..=n / 2).map(CasimirKind::Order).collect();
    if n.is_multiple_of(2) && n >= 2 {
        out.push(CasimirKind::Top(Sign::Plus));
        out.push(CasimirKind::Top(Sign::Minus));
    }
    out
}
