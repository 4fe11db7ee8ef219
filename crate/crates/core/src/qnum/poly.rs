use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gauss::GaussRat;

/// Dense polynomial in `u` over ℚ(i), coefficients in ascending degree.
///
/// Never stores trailing zero coefficients; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c·u^k`.
    pub fn monomial(c: GaussRat, k: usize) -> Self {
        let mut coeffs = vec![GaussRat::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    /// Multiplicity of `u` as a factor (0 for the zero polynomial).
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `u^k`; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Poly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![GaussRat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = GaussRat::zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = rhs.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut coeffs = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                coeffs[i + j] = &coeffs[i + j] + &t;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Euclidean division; `rhs` must be nonzero.
    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        let d = rhs.degree().expect("polynomial division by zero");
        let lead_inv = rhs.leading().and_then(GaussRat::inv).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![GaussRat::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &c * b;
                rem[k + j] = &rem[k + j] - &t;
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading")),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.make_monic();
        }
        a.make_monic()
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.to_complex())
    }

    /// Sum of coefficient magnitudes times powers of `|u|`; the natural scale
    /// against which a numeric evaluation is judged to vanish.
    pub fn eval_scale(&self, u: Complex64) -> f64 {
        let r = u.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.to_complex().norm())
    }

    pub fn eval_exact(&self, u: &GaussRat) -> GaussRat {
        self.coeffs.iter().rev().fold(GaussRat::zero(), |acc, c| &(&acc * u) + c)
    }

    /// Reverses the coefficient vector: `u^deg · p(1/u)`.
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| GaussRat::from_int(c)).collect())
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[1, 0, 0, 0, -1]);
        let b = p(&[-1, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 0, -1]));
        assert!(r.is_zero());
        let c = p(&[3, 2, 1]);
        let (q, r) = c.div_rem(&p(&[1, 1]));
        assert_eq!(q.mul(&p(&[1, 1])).add(&r), c);
    }

    #[test]
    fn gcd_is_monic() {
        // (u^2 - 1)(2u + 3) and (u - 1)(u + 5)
        let a = p(&[-1, 0, 1]).mul(&p(&[3, 2]));
        let b = p(&[-1, 1]).mul(&p(&[5, 1]));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 4]).low_order(), 2);
        assert_eq!(Poly::zero().gcd(&p(&[2, 4])), p(&[2, 4]).make_monic());
    }
}
