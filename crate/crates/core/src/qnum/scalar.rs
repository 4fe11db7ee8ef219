use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::halfint::HalfInt;
use super::poly::Poly;
use crate::error::Error;

/// Exact element of ℚ(i)(u), where `u² = q`.
///
/// Stored as `u^shift · num(u) / den(u)` with `num(0) ≠ 0`, `den(0) ≠ 0`,
/// `gcd(num, den) = 1` and `den` monic, so two values are equal exactly when
/// their fields are. Zero is `shift = 0, num = 0, den = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { shift: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        QScalar::constant(GaussRat::one())
    }

    pub fn from_int(n: i64) -> Self {
        QScalar::constant(GaussRat::from_int(n))
    }

    pub fn constant(c: GaussRat) -> Self {
        if c.is_zero() {
            return QScalar::zero();
        }
        QScalar { shift: 0, num: Poly::constant(c), den: Poly::one() }
    }

    pub fn i() -> Self {
        QScalar::constant(GaussRat::i())
    }

    /// `c · u^k`.
    pub fn monomial(c: GaussRat, k: i64) -> Self {
        if c.is_zero() {
            return QScalar::zero();
        }
        QScalar { shift: k, num: Poly::constant(c), den: Poly::one() }
    }

    /// `u^k`.
    pub fn u_pow(k: i64) -> Self {
        QScalar::monomial(GaussRat::one(), k)
    }

    /// The monomial `q^x = u^{2x}`.
    pub fn qpower(x: HalfInt) -> Self {
        QScalar::u_pow(x.twice())
    }

    /// The q-number `[x] = (q^x − q^{−x}) / (q − q^{−1})`.
    pub fn qbracket(x: HalfInt) -> Self {
        let t = x.twice();
        if t == 0 {
            return QScalar::zero();
        }
        if t < 0 {
            return -QScalar::qbracket(-x);
        }
        // u^{-t}(u^{2t} − 1) / (u^{-2}(u^4 − 1))
        let t_us = t as usize;
        let num = Poly::monomial(GaussRat::one(), 2 * t_us).sub(&Poly::one());
        let den = Poly::monomial(GaussRat::one(), 4).sub(&Poly::one());
        QScalar::from_parts(2 - t, num, den)
    }

    /// `u^shift · num / den`, brought to canonical form.
    pub fn from_parts(shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "QScalar with zero denominator");
        if num.is_zero() {
            return QScalar::zero();
        }
        let (ln, ld) = (num.low_order(), den.low_order());
        let mut num = num.shift_down(ln);
        let mut den = den.shift_down(ld);
        let shift = shift + ln as i64 - ld as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if g.degree() != Some(0) {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        QScalar { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.den.is_one() && self.num.is_one()
    }

    /// True when the value is a Laurent polynomial in `u`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// If the value is `c·u^k`, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(&GaussRat, i64)> {
        (self.den.is_one() && self.num.coeffs().len() == 1).then(|| (&self.num.coeffs()[0], self.shift))
    }

    /// If the value is a constant in ℚ(i), returns it.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QScalar::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &QScalar) -> Result<Self, Error> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self, Error> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = QScalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// The automorphism `u ↦ u^{−1}` (equivalently `q ↦ q^{−1}`).
    pub fn subst_u_inverse(&self) -> Self {
        if self.is_zero() {
            return QScalar::zero();
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        QScalar::from_parts(-self.shift - dn + dd, self.num.reversed(), self.den.reversed())
    }

    /// Substitutes `u := √q0` (principal branch) and evaluates in double precision.
    pub fn eval_numeric(&self, q0: Complex64) -> Result<Complex64, Error> {
        if q0 == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("q0 must be nonzero".into()));
        }
        let u = q0.sqrt();
        self.eval_at_u(u)
    }

    /// Evaluates at a given numeric `u`.
    pub fn eval_at_u(&self, u: Complex64) -> Result<Complex64, Error> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let den = self.den.eval_complex(u);
        let scale = self.den.eval_scale(u);
        if den.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Pole { denominator: render_poly(&self.den, 0, Variable::U), at: u.to_string() });
        }
        Ok(u.powi(self.shift as i32) * self.num.eval_complex(u) / den)
    }

    /// Exact evaluation at `u = u0 ∈ ℚ(i)`.
    pub fn eval_exact(&self, u0: &GaussRat) -> Result<GaussRat, Error> {
        if self.is_zero() {
            return Ok(GaussRat::zero());
        }
        let den = self.den.eval_exact(u0);
        if den.is_zero() {
            return Err(Error::Pole { denominator: render_poly(&self.den, 0, Variable::U), at: u0.to_string() });
        }
        let mut upow = GaussRat::one();
        if self.shift != 0 {
            let base = if self.shift > 0 {
                u0.clone()
            } else {
                u0.inv().ok_or_else(|| Error::Pole { denominator: "u".into(), at: "0".into() })?
            };
            for _ in 0..self.shift.unsigned_abs() {
                upow = &upow * &base;
            }
        }
        Ok(&(&upow * &self.num.eval_exact(u0)) / &den)
    }

    /// Rendering with powers of `q` (`q^(1/2)` for odd powers of `u`).
    pub fn pretty(&self) -> String {
        self.render(Variable::Q)
    }

    fn render(&self, var: Variable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        // Clear coefficient denominators so both halves have Gaussian-integer coefficients.
        let mut l = BigInt::one();
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            l = l.lcm(&c.denom_lcm());
        }
        let num = Poly::from_coeffs(self.num.coeffs().iter().map(|c| c.scale_int(&l)).collect());
        let den = Poly::from_coeffs(self.den.coeffs().iter().map(|c| c.scale_int(&l)).collect());
        let top = render_poly(&num, self.shift, var);
        if den.is_one() {
            return top;
        }
        let top = if num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({top})") } else { top };
        let bottom = render_poly(&den, 0, var);
        let atomic_bottom =
            den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 && !bottom.contains(['*', '/', ' ', '-']);
        if atomic_bottom {
            format!("{top}/{bottom}")
        } else {
            format!("{top}/({bottom})")
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variable {
    U,
    Q,
}

fn render_power(e: i64, var: Variable) -> Option<String> {
    if e == 0 {
        return None;
    }
    Some(match var {
        Variable::U if e == 1 => "u".to_string(),
        Variable::U => format!("u^{e}"),
        Variable::Q if e == 2 => "q".to_string(),
        Variable::Q if e % 2 == 0 => format!("q^{}", e / 2),
        Variable::Q => format!("q^({e}/2)"),
    })
}

/// Renders `u^shift · p(u)` with descending exponents.
fn render_poly(p: &Poly, shift: i64, var: Variable) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = shift + k as i64;
        let (cs, atomic) = c.render();
        let term = match render_power(e, var) {
            None => {
                if atomic || cs.starts_with('-') && !cs[1..].contains([' ', '/']) {
                    cs
                } else {
                    format!("({cs})")
                }
            }
            Some(pw) => {
                if c.is_one() {
                    pw
                } else if (-c).is_one() {
                    format!("-{pw}")
                } else if atomic || (cs.starts_with('-') && !cs[1..].contains([' ', '/'])) {
                    format!("{cs}*{pw}")
                } else {
                    format!("({cs})*{pw}")
                }
            }
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn add_impl(a: &QScalar, b: &QScalar) -> QScalar {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let s = a.shift.min(b.shift);
    let an = a.num.shift_up((a.shift - s) as usize);
    let bn = b.num.shift_up((b.shift - s) as usize);
    if a.den.is_one() && b.den.is_one() {
        let num = an.add(&bn);
        if num.is_zero() {
            return QScalar::zero();
        }
        let lo = num.low_order();
        return QScalar { shift: s + lo as i64, num: num.shift_down(lo), den: Poly::one() };
    }
    if a.den == b.den {
        return QScalar::from_parts(s, an.add(&bn), a.den.clone());
    }
    let num = an.mul(&b.den).add(&bn.mul(&a.den));
    QScalar::from_parts(s, num, a.den.mul(&b.den))
}

fn mul_impl(a: &QScalar, b: &QScalar) -> QScalar {
    if a.is_zero() || b.is_zero() {
        return QScalar::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return QScalar { shift: a.shift + b.shift, num: a.num.mul(&b.num), den: Poly::one() };
    }
    QScalar::from_parts(a.shift + b.shift, a.num.mul(&b.num), a.den.mul(&b.den))
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        add_impl(self, rhs)
    }
}

impl Add for QScalar {
    type Output = QScalar;
    fn add(self, rhs: QScalar) -> QScalar {
        add_impl(&self, &rhs)
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        add_impl(self, &-rhs)
    }
}

impl Sub for QScalar {
    type Output = QScalar;
    fn sub(self, rhs: QScalar) -> QScalar {
        add_impl(&self, &-rhs)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        mul_impl(self, rhs)
    }
}

impl Mul for QScalar {
    type Output = QScalar;
    fn mul(self, rhs: QScalar) -> QScalar {
        mul_impl(&self, &rhs)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

impl fmt::Display for QScalar {
    /// Fraction of Gaussian-integer Laurent expressions in `u`, e.g. `u/(u^2 + 1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Variable::U))
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

impl FromStr for QScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        crate::syntax::parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn bracket_examples() {
        assert!(QScalar::qbracket(HalfInt::ZERO).is_zero());
        // [2] = (u^4 + 1)/u^2
        let two = QScalar::qbracket(HalfInt::from_int(2));
        let expect = &QScalar::u_pow(2) + &QScalar::u_pow(-2);
        assert_eq!(two, expect);
        assert_eq!(two.to_string(), "u^2 + u^-2");
        // [1/2] = 1/(u + u^{-1}) = u/(u^2 + 1)
        let half = QScalar::qbracket(h(1));
        assert_eq!(half.to_string(), "u/(u^2 + 1)");
        let u = Complex64::new(1.1, 0.0);
        let direct = (u - 1.0 / u) / (u * u - 1.0 / (u * u));
        assert!((half.eval_at_u(u).unwrap() - direct).norm() < 1e-14);
        assert_eq!(QScalar::qbracket(HalfInt::ONE), QScalar::one());
    }

    #[test]
    fn qpower_examples() {
        assert!(QScalar::qpower(HalfInt::ZERO).is_one());
        assert_eq!(QScalar::qpower(HalfInt::ONE), QScalar::u_pow(2));
        assert_eq!(QScalar::qpower(h(-3)), QScalar::u_pow(-3));
        assert!((&QScalar::qpower(h(5)) * &QScalar::qpower(h(-5))).is_one());
    }

    #[test]
    fn field_examples() {
        let b = |t| QScalar::qbracket(HalfInt::from_int(t));
        let lhs = &(&(&b(2) * &b(2)) - &(&b(1) * &b(1))) - &(&b(3) * &b(1));
        assert!(lhs.is_zero());
        assert!((&b(3) + &QScalar::qbracket(HalfInt::from_int(-3))).is_zero());
        let p = QScalar::qpower(HalfInt::HALF);
        assert!(p.checked_div(&p).unwrap().is_one());
        assert!(matches!(p.checked_div(&QScalar::zero()), Err(Error::DivisionByZero)));
        let a = &b(3) - &b(3);
        assert_eq!(a, QScalar::zero());
    }

    #[test]
    fn numeric_examples() {
        let two = QScalar::qbracket(HalfInt::from_int(2));
        let v = two.eval_numeric(Complex64::new(1.2, 0.0)).unwrap();
        assert!((v.re - (1.2 + 1.0 / 1.2)).abs() < 1e-14 && v.im == 0.0);
        for t in -7..=7 {
            let x = QScalar::qbracket(h(t));
            let v = x.eval_numeric(Complex64::new(1.0, 0.0)).unwrap();
            assert!((v.re - t as f64 / 2.0).abs() < 1e-14);
        }
        // 1/(u − u^{-1}) has a pole at q = 1.
        let s = (&QScalar::u_pow(1) - &QScalar::u_pow(-1)).inv().unwrap();
        let err = s.eval_numeric(Complex64::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }), "{err}");
        assert!(err.to_string().contains("u^2 - 1"), "{err}");
        assert!(QScalar::one().eval_numeric(Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn exact_evaluation() {
        let half = QScalar::qbracket(h(3));
        assert_eq!(half.eval_exact(&GaussRat::one()).unwrap(), GaussRat::from_ratio(3, 2));
        let s = (&QScalar::u_pow(1) - &QScalar::u_pow(-1)).inv().unwrap();
        assert!(s.eval_exact(&GaussRat::one()).is_err());
    }

    #[test]
    fn u_inverse_examples() {
        for t in -6..=6 {
            let x = QScalar::qbracket(h(t));
            assert_eq!(x.subst_u_inverse(), x);
        }
        assert_eq!(QScalar::qpower(HalfInt::ONE).subst_u_inverse(), QScalar::qpower(-HalfInt::ONE));
        let s = &QScalar::u_pow(1) + &QScalar::one();
        let t = s.subst_u_inverse();
        assert_eq!(t, &QScalar::u_pow(-1) + &QScalar::one());
        assert_eq!(t.to_string(), "1 + u^-1");
        assert_eq!(t.subst_u_inverse(), s);
    }

    #[test]
    fn rendering() {
        assert_eq!(QScalar::zero().to_string(), "0");
        assert_eq!(QScalar::from_int(-2).to_string(), "-2");
        assert_eq!(QScalar::i().to_string(), "i");
        let c = QScalar::monomial(GaussRat::from_ratio(1, 2), -3);
        assert_eq!(c.to_string(), "u^-3/2");
        assert_eq!(c.pretty(), "q^(-3/2)/2");
        let d = &QScalar::u_pow(3) - &QScalar::u_pow(-1);
        assert_eq!(d.pretty(), "q^(3/2) - q^(-1/2)");
        assert_eq!(QScalar::u_pow(-4).pretty(), "q^-2");
    }
}
