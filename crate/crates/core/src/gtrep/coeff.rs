//! q-deformed Gel'fand–Tsetlin matrix coefficients at real `q0 > 0`.

use num_complex::Complex64;

use super::pattern::GTPattern;
use crate::error::{Error, Result};
use crate::qnum::HalfInt;

/// `[x]` at real `q0 > 0`, written as `sinh(x h)/sinh(h)` with `h = ln q0`
/// so that `q0` near 1 stays well conditioned.
pub fn qnum_real(x: f64, q0: f64) -> f64 {
    let h = q0.ln();
    if h.abs() < 1e-300 {
        return x;
    }
    (x * h).sinh() / h.sinh()
}

fn br(x: HalfInt, q0: f64) -> f64 {
    qnum_real(x.to_f64(), q0)
}

/// Scales one A-coefficient; used only by negative controls.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub pattern: GTPattern,
    /// Row `2p` being raised.
    pub p: u32,
    /// Zero-based entry within that row.
    pub r: usize,
    pub factor: f64,
}

fn checked_sqrt(rad: f64, scale: f64, context: impl FnOnce() -> String) -> Result<f64> {
    if rad < -1e-12 * scale.max(1.0) {
        return Err(Error::NegativeRadicand { value: rad, context: context() });
    }
    Ok(rad.max(0.0).sqrt())
}

fn check_q0(q0: f64) -> Result<()> {
    if q0 > 0.0 && q0.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("q0 must be a finite positive real, got {q0}")))
    }
}

/// `A^r_{2p}(α)`: the coefficient of `|m^{+r}_{2p}⟩` in `T(I_{2p+1,2p})|α⟩`
/// (`r` zero-based). Zero when the raised pattern leaves the basis.
pub fn coeff_a(alpha: &GTPattern, r: usize, p: u32, q0: f64) -> Result<f64> {
    coeff_a_with(alpha, r, p, q0, None)
}

pub fn coeff_a_with(alpha: &GTPattern, r: usize, p: u32, q0: f64, tweak: Option<&Perturbation>) -> Result<f64> {
    check_q0(q0)?;
    let k = 2 * p;
    if p == 0 || k + 1 > alpha.n() || r >= alpha.row(k).len() {
        return Err(Error::IndexOutOfRange(format!("A^{}_{} for n = {}", r + 1, k, alpha.n())));
    }
    if !alpha.shifted(k, r, 1).is_valid() {
        return Ok(0.0);
    }
    let mid = alpha.l_row(k);
    let l = mid[r];
    let mut num = 1.0;
    for &x in alpha.l_row(k + 1).iter().chain(alpha.l_row(k - 1).iter()) {
        num *= br(x + l, q0) * br(x - l - 1, q0);
    }
    let mut den = 1.0;
    for (i, &x) in mid.iter().enumerate() {
        if i != r {
            den *= br(x + l, q0) * br(x - l, q0) * br(x + l + 1, q0) * br(x - l - 1, q0);
        }
    }
    let rad = num / den;
    let lf = l.to_f64();
    // pole-free form of [l][l+1]/([2l][2l+2])
    let fac = 1.0 / ((q0.powf(lf) + q0.powf(-lf)) * (q0.powf(lf + 1.0) + q0.powf(-lf - 1.0)));
    let val = checked_sqrt(fac * rad, num.abs() / den.abs(), || format!("A^{}_{} at {alpha:?}", r + 1, k))?;
    match tweak {
        Some(t) if t.p == p && t.r == r && t.pattern == *alpha => Ok(val * t.factor),
        _ => Ok(val),
    }
}

/// `B^r_{2p−1}(α)`: the coefficient of `|m^{+r}_{2p−1}⟩` in `T(I_{2p,2p−1})|α⟩`.
pub fn coeff_b(alpha: &GTPattern, r: usize, p: u32, q0: f64) -> Result<f64> {
    check_q0(q0)?;
    let k = 2 * p - 1;
    if p < 2 || k + 1 > alpha.n() || r >= alpha.row(k).len() {
        return Err(Error::IndexOutOfRange(format!("B^{}_{} for n = {}", r + 1, k, alpha.n())));
    }
    if !alpha.shifted(k, r, 1).is_valid() {
        return Ok(0.0);
    }
    let mid = alpha.l_row(k);
    let l = mid[r];
    let mut num = 1.0;
    for &x in alpha.l_row(k + 1).iter().chain(alpha.l_row(k - 1).iter()) {
        num *= br(x + l, q0) * br(x - l, q0);
    }
    let mut den = br(l, q0).powi(2) * br(l.doubled() + 1, q0) * br(l.doubled() - 1, q0);
    for (i, &x) in mid.iter().enumerate() {
        if i != r {
            den *= br(x + l, q0) * br(x - l, q0) * br(x + l - 1, q0) * br(x - l - 1, q0);
        }
    }
    let rad = num / den;
    checked_sqrt(rad, rad.abs(), || format!("B^{}_{} at {alpha:?}", r + 1, k))
}

/// `C_{2p−1}(α)`, the diagonal part of `T(I_{2p,2p−1})`, which acts as `i·C`.
///
/// Exact zeros are counted rather than divided so that `0/0` never arises.
pub fn coeff_c(alpha: &GTPattern, p: u32, q0: f64) -> Result<f64> {
    check_q0(q0)?;
    if p == 0 || 2 * p > alpha.n() {
        return Err(Error::IndexOutOfRange(format!("C_{} for n = {}", 2 * p - 1, alpha.n())));
    }
    let (mut zeros, mut v) = (0i32, 1.0);
    let (mid, low) = if p > 1 { (alpha.l_row(2 * p - 1), alpha.l_row(2 * p - 2)) } else { (Vec::new(), Vec::new()) };
    for &x in alpha.l_row(2 * p).iter().chain(low.iter()) {
        if x.is_zero() {
            zeros += 1;
        } else {
            v *= br(x, q0);
        }
    }
    for &x in &mid {
        for y in [x, x - 1] {
            if y.is_zero() {
                zeros -= 1;
            } else {
                v /= br(y, q0);
            }
        }
    }
    if zeros < 0 {
        return Err(Error::Pole { denominator: format!("C_{}", 2 * p - 1), at: format!("{alpha:?}") });
    }
    Ok(if zeros > 0 { 0.0 } else { v })
}

pub(crate) fn imag(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtrep::{enumerate_patterns, HighestWeight};

    fn pats(n: u32, s: &str) -> Vec<GTPattern> {
        enumerate_patterns(&HighestWeight::parse(n, s).unwrap()).unwrap()
    }

    #[test]
    fn bracket_limits() {
        assert!((qnum_real(2.0, 1.0) - 2.0).abs() < 1e-15);
        assert!((qnum_real(2.0, 1.2) - (1.2 + 1.0 / 1.2)).abs() < 1e-14);
        assert!((qnum_real(-1.5, 0.85) + qnum_real(1.5, 0.85)).abs() < 1e-15);
    }

    #[test]
    fn c_examples() {
        let ps = pats(3, "1");
        assert_eq!(coeff_c(&ps[2], 1, 1.2).unwrap(), 1.0);
        assert_eq!(coeff_c(&ps[1], 1, 1.2).unwrap(), 0.0);
        assert_eq!(coeff_c(&ps[0], 1, 2.0).unwrap(), -1.0);
    }

    #[test]
    fn a_examples() {
        for q0 in [1.2f64, 0.85, 2.0] {
            let ps = pats(3, "1/2");
            let want = 1.0 / (q0.sqrt() + 1.0 / q0.sqrt());
            assert!((coeff_a(&ps[0], 0, 1, q0).unwrap() - want).abs() < 1e-14);
            assert_eq!(coeff_a(&ps[1], 0, 1, q0).unwrap(), 0.0);
        }
        // classical limit of the replacement factor
        let ps = pats(3, "1");
        let a = coeff_a(&ps[1], 0, 1, 1.0).unwrap();
        assert!((a - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bad_q0_is_rejected() {
        let ps = pats(3, "1");
        assert!(coeff_a(&ps[0], 0, 1, 0.0).is_err());
        assert!(coeff_c(&ps[0], 1, -1.0).is_err());
    }
}
