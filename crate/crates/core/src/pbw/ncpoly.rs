use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::symbol::{GenSymbol, Word};
use crate::error::{Error, Result};
use crate::qnum::QScalar;
use crate::syntax::{self, ParseTarget, Sign};

/// A finite linear combination of words with [`QScalar`] coefficients.
///
/// Zero coefficients are never stored; terms iterate in degree-lexicographic
/// word order. The normal-form flag is set only by [`super::normalize`] and
/// does not take part in equality.
#[derive(Clone, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, QScalar>,
    normal: bool,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::scalar(QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        NCPoly::term(Word::empty(), c)
    }

    pub fn term(w: Word, c: QScalar) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        NCPoly::term(w, QScalar::one())
    }

    pub fn symbol(s: GenSymbol) -> Self {
        NCPoly::word(Word(vec![s]))
    }

    /// The basic generator `I_{j+1,j}`.
    pub fn basic(j: u32) -> Self {
        NCPoly::symbol(GenSymbol::basic(j))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, QScalar)>) -> Self {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `c·w` in place.
    pub fn add_term(&mut self, w: Word, c: QScalar) {
        self.normal = false;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c·p` in place.
    pub fn add_scaled(&mut self, p: &NCPoly, c: &QScalar) {
        for (w, a) in &p.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient if `self` is a multiple of the empty word.
    pub fn as_scalar(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    pub fn is_normal_form(&self) -> bool {
        self.normal
    }

    pub(crate) fn mark_normal(mut self) -> Self {
        self.normal = true;
        self
    }

    /// Largest upper index among all symbols (0 for scalars).
    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(Word::max_index).max().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.normal = false;
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &NCPoly) -> NCPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(), normal: false }
    }

    pub fn scale(&self, c: &QScalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(), normal: false }
    }

    pub fn mul(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Applies `f` to every coefficient and `g` to every symbol.
    pub fn map(&self, f: impl Fn(&QScalar) -> QScalar, g: impl Fn(GenSymbol) -> GenSymbol) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (Word(w.symbols().iter().map(|&s| g(s)).collect()), f(c))))
    }

    /// Coefficient-wise `u ↦ u^{-1}` together with `I^+ ↔ I^-`.
    pub fn dual(&self) -> NCPoly {
        self.map(QScalar::subst_u_inverse, GenSymbol::flipped)
    }
}

impl PartialEq for NCPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for NCPoly {}

fn render_term(w: &Word, c: &QScalar) -> (bool, String) {
    if w.is_empty() {
        let s = c.to_string();
        return match s.strip_prefix('-') {
            Some(rest) if !rest.contains([' ', '/']) => (true, rest.to_string()),
            _ if s.contains([' ', '/']) => (false, format!("({s})")),
            _ => (false, s),
        };
    }
    if c.is_one() {
        return (false, w.to_string());
    }
    if (-c).is_one() {
        return (true, w.to_string());
    }
    let s = c.to_string();
    match s.strip_prefix('-') {
        Some(rest) if !rest.contains([' ', '/']) => (true, format!("{rest} {w}")),
        _ if s.contains([' ', '/']) => (false, format!("({s}) {w}")),
        _ => (false, format!("{s} {w}")),
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (neg, body) = render_term(w, c);
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPoly({self})")
    }
}

impl ParseTarget for NCPoly {
    fn from_scalar(c: QScalar) -> Self {
        NCPoly::scalar(c)
    }
    fn generator(sign: Sign, upper: u32, lower: u32) -> Result<Self> {
        Ok(NCPoly::symbol(GenSymbol::new(sign, upper, lower)?))
    }
    fn as_scalar(&self) -> Option<QScalar> {
        NCPoly::as_scalar(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        NCPoly::add(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        NCPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        NCPoly::neg(self)
    }
}

impl FromStr for NCPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        syntax::parse::<NCPoly>(s)
    }
}
