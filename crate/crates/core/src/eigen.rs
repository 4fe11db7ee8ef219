//! Closed-form Casimir eigenvalues through generalized factorial elementary
//! symmetric polynomials, computed exactly.

use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gtrep::{validate_weight, HighestWeight};
use crate::qnum::{HalfInt, QScalar};
use crate::syntax::Sign;

/// The shift sequence `a_j = [ε + j − 1]²`, `j ≥ 1`, for `ε ∈ {0, 1/2}`.
///
/// Terms are produced on demand and cached process-wide per `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftSequence {
    pub epsilon: HalfInt,
}

type Cache = Mutex<Vec<QScalar>>;

fn cache(epsilon: HalfInt) -> &'static Cache {
    static ZERO: OnceLock<Cache> = OnceLock::new();
    static HALF: OnceLock<Cache> = OnceLock::new();
    let cell = if epsilon.is_zero() { &ZERO } else { &HALF };
    cell.get_or_init(|| Mutex::new(Vec::new()))
}

impl ShiftSequence {
    pub fn new(epsilon: HalfInt) -> Result<Self> {
        if epsilon != HalfInt::ZERO && epsilon != HalfInt::HALF {
            return Err(Error::InvalidArgument(format!("epsilon must be 0 or 1/2, got {epsilon}")));
        }
        Ok(ShiftSequence { epsilon })
    }

    /// `ε = 0` for even `n`, `1/2` for odd `n`.
    pub fn for_n(n: u32) -> Self {
        ShiftSequence { epsilon: if n.is_multiple_of(2) { HalfInt::ZERO } else { HalfInt::HALF } }
    }

    /// `a_j`, one-based.
    pub fn get(&self, j: usize) -> QScalar {
        assert!(j >= 1, "shift sequence is one-based");
        let mut terms = cache(self.epsilon).lock().unwrap_or_else(|e| e.into_inner());
        while terms.len() < j {
            let b = QScalar::qbracket(self.epsilon + terms.len() as i64);
            terms.push(&b * &b);
        }
        terms[j - 1].clone()
    }
}

/// `l_k = m_k + N − k + ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCoordinates {
    pub l: Vec<HalfInt>,
}

pub fn l_coordinates(hw: &HighestWeight) -> Result<LCoordinates> {
    if !validate_weight(hw) {
        return Err(Error::InvalidWeight(format!("{hw:?}")));
    }
    let big_n = hw.rank() as i64;
    let eps = ShiftSequence::for_n(hw.n).epsilon;
    let l = hw.m.iter().enumerate().map(|(k, &m)| m + (big_n - k as i64 - 1) + eps).collect();
    Ok(LCoordinates { l })
}

/// `e_r(z | a) = Σ_{p₁<…<p_r} Π_t (z_{p_t} − a_{p_t − t + 1})`.
pub fn e_factorial(z: &[QScalar], a: &ShiftSequence, r: usize) -> Result<QScalar> {
    if r > z.len() {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds N = {}", z.len())));
    }
    let mut total = QScalar::zero();
    let mut picks = Vec::with_capacity(r);
    subsets(z.len(), r, 0, &mut picks, &mut |ps| {
        let mut prod = QScalar::one();
        for (t, &p) in ps.iter().enumerate() {
            // one-based p_t − t + 1 with zero-based p and t
            prod = &prod * &(&z[p] - &a.get(p - t + 1));
        }
        total = &total + &prod;
    });
    Ok(total)
}

fn subsets(n: usize, r: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() == r {
        f(acc);
        return;
    }
    for p in start..n {
        acc.push(p);
        subsets(n, r, p + 1, acc, f);
        acc.pop();
    }
}

fn squared_brackets(hw: &HighestWeight) -> Result<Vec<QScalar>> {
    Ok(l_coordinates(hw)?
        .l
        .into_iter()
        .map(|l| {
            let b = QScalar::qbracket(l);
            &b * &b
        })
        .collect())
}

/// Eigenvalue of `C^{(2r)}_n`: `(−1)^r e_r([l₁]², …, [l_N]² | a)`.
pub fn chi_2r(hw: &HighestWeight, r: u32) -> Result<QScalar> {
    if r < 1 || r > hw.n / 2 {
        return Err(Error::InvalidArgument(format!("order 2r = {} is not available for n = {}", 2 * r, hw.n)));
    }
    let e = e_factorial(&squared_brackets(hw)?, &ShiftSequence::for_n(hw.n), r as usize)?;
    Ok(if r.is_multiple_of(2) { e } else { -e })
}

/// Eigenvalue of `C^{(n)±}_n` for even `n`: `i^N Π_k [l_k]`, the same for both signs.
pub fn chi_top(hw: &HighestWeight, _sign: Sign) -> Result<QScalar> {
    if !hw.n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("C^(n)± exists only for even n, got n = {}", hw.n)));
    }
    let l = l_coordinates(hw)?.l;
    let i_pow = match l.len() % 4 {
        0 => QScalar::one(),
        1 => QScalar::i(),
        2 => QScalar::from_int(-1),
        _ => -QScalar::i(),
    };
    Ok(l.into_iter().fold(i_pow, |acc, x| &acc * &QScalar::qbracket(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(n: u32, s: &str) -> HighestWeight {
        HighestWeight::parse(n, s).unwrap()
    }

    fn br(s: &str) -> QScalar {
        QScalar::qbracket(s.parse().unwrap())
    }

    fn sq(s: &str) -> QScalar {
        let b = br(s);
        &b * &b
    }

    #[test]
    fn shift_sequence() {
        let a = ShiftSequence::for_n(4);
        assert!(a.get(1).is_zero());
        assert_eq!(a.get(3), sq("2"));
        let a = ShiftSequence::for_n(5);
        assert_eq!(a.get(1), sq("1/2"));
        assert_eq!(a.get(2), sq("3/2"));
        assert!(ShiftSequence::new(HalfInt::ONE).is_err());
    }

    #[test]
    fn l_examples() {
        let h = |x: &str| x.parse::<HalfInt>().unwrap();
        assert_eq!(l_coordinates(&hw(3, "2")).unwrap().l, vec![h("5/2")]);
        assert_eq!(l_coordinates(&hw(4, "2,-1")).unwrap().l, vec![h("3"), h("-1")]);
        assert_eq!(l_coordinates(&hw(5, "1,0")).unwrap().l, vec![h("5/2"), h("1/2")]);
    }

    #[test]
    fn e_examples() {
        let a = ShiftSequence::for_n(5);
        let z = vec![sq("3"), sq("1")];
        assert!(e_factorial(&z, &a, 0).unwrap().is_one());
        let want = &(&z[0] - &a.get(1)) + &(&z[1] - &a.get(2));
        assert_eq!(e_factorial(&z, &a, 1).unwrap(), want);
        let want = &(&z[0] - &a.get(1)) * &(&z[1] - &a.get(1));
        assert_eq!(e_factorial(&z, &a, 2).unwrap(), want);
        assert!(e_factorial(&z, &a, 3).is_err());
    }

    #[test]
    fn chi_examples() {
        for m in ["0", "1/2", "1", "3/2", "2"] {
            let mm: HalfInt = m.parse().unwrap();
            let want = -(&QScalar::qbracket(mm) * &QScalar::qbracket(mm + 1));
            assert_eq!(chi_2r(&hw(3, m), 1).unwrap(), want);
        }
        let want = -(&(&sq("3") + &sq("1")) - &QScalar::one());
        assert_eq!(chi_2r(&hw(4, "2,1"), 1).unwrap(), want);
        assert!(chi_2r(&hw(5, "1,0"), 2).unwrap().is_zero());
        assert!(chi_2r(&hw(5, "1,0"), 3).is_err());

        assert_eq!(chi_top(&hw(4, "1,1"), Sign::Plus).unwrap(), -br("2"));
        assert!(chi_top(&hw(4, "2,0"), Sign::Minus).unwrap().is_zero());
        let want = -(&(&QScalar::i() * &br("3")) * &br("2"));
        assert_eq!(chi_top(&hw(6, "1,1,1"), Sign::Plus).unwrap(), want);
        assert!(chi_top(&hw(5, "1,0"), Sign::Plus).is_err());
    }

    #[test]
    fn top_order_is_square_of_top() {
        for (n, w) in [(4, "1,-1"), (4, "3/2,1/2"), (6, "2,1,-1"), (6, "1/2,1/2,1/2")] {
            let h = hw(n, w);
            let t = chi_top(&h, Sign::Plus).unwrap();
            assert_eq!(chi_2r(&h, n / 2).unwrap(), &t * &t);
        }
    }
}
