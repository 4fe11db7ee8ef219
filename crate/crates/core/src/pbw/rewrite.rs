use std::collections::HashMap;

use super::ncpoly::NCPoly;
use super::symbol::{GenSymbol, Word};
use crate::error::{Error, Result};
use crate::qnum::QScalar;
use crate::syntax::Sign;

/// `[x, y]_{q^{±1}} = u^{±1}·x·y − u^{∓1}·y·x`, unnormalized.
pub fn qcomm(x: &NCPoly, y: &NCPoly, sgn: Sign) -> NCPoly {
    let s = sgn.unit();
    x.mul(y).scale(&QScalar::u_pow(s)).sub(&y.mul(x).scale(&QScalar::u_pow(-s)))
}

/// Rewrites a generator as a polynomial in the basic generators via
/// `I^±_{k,l} = [I_{l+1,l}, I^±_{k,l+1}]_{q^{±1}}`.
pub fn expand_composite(g: GenSymbol) -> NCPoly {
    if g.is_basic() {
        return NCPoly::symbol(g);
    }
    let inner = GenSymbol::new(g.sign(), g.upper(), g.lower() + 1).expect("k > l + 1");
    qcomm(&NCPoly::basic(g.lower()), &expand_composite(inner), g.sign())
}

/// Which of the six configurations a disordered pair `a·b` (`b ≺ a`) falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairCase {
    SharedUpper,
    Chain,
    SharedLower,
    Separated,
    Nested,
    Crossing,
}

/// Classifies `a·b` for `b ≺ a`.
pub fn classify(a: GenSymbol, b: GenSymbol) -> Result<PairCase> {
    if !b.precedes(a) {
        return Err(Error::AlreadyOrdered(format!("{a} {b}")));
    }
    let (k, l, m, p) = (a.upper(), a.lower(), b.upper(), b.lower());
    Ok(if k == m {
        PairCase::SharedUpper
    } else if l == m {
        PairCase::Chain
    } else if l == p {
        PairCase::SharedLower
    } else if l > m {
        PairCase::Separated
    } else if p > l {
        PairCase::Nested
    } else {
        PairCase::Crossing
    })
}

fn w2(a: GenSymbol, b: GenSymbol) -> Word {
    Word(vec![a, b])
}

fn w1(a: GenSymbol) -> Word {
    Word(vec![a])
}

/// Expresses the disordered product `a·b` of two `I^+` symbols (with `b ≺ a`)
/// through degree-lexicographically smaller words.
pub fn reorder_rule(a: GenSymbol, b: GenSymbol) -> Result<NCPoly> {
    if a.sign() != Sign::Plus || b.sign() != Sign::Plus {
        return Err(Error::InvalidArgument(format!("reorder_rule needs I^+ symbols, got {a} {b}")));
    }
    let case = classify(a, b)?;
    let (k, l, m, p) = (a.upper(), a.lower(), b.upper(), b.lower());
    let s = GenSymbol::plus;
    let u = QScalar::u_pow;
    Ok(match case {
        // I_{kl} I_{km} = q^{-1} I_{km} I_{kl} + q^{-1/2} I_{lm}
        PairCase::SharedUpper => NCPoly::from_terms([(w2(b, a), u(-2)), (w1(s(l, p)), u(-1))]),
        // I_{kl} I_{lp} = q I_{lp} I_{kl} − q^{1/2} I_{kp}
        PairCase::Chain => NCPoly::from_terms([(w2(b, a), u(2)), (w1(s(k, p)), -u(1))]),
        // I_{kl} I_{ml} = q^{-1} I_{ml} I_{kl} + q^{-1/2} I_{km}
        PairCase::SharedLower => NCPoly::from_terms([(w2(b, a), u(-2)), (w1(s(k, m)), u(-1))]),
        PairCase::Separated | PairCase::Nested => NCPoly::word(w2(b, a)),
        // I_{kl} I_{mp} = I_{mp} I_{kl} + (q − q^{-1})(I_{lp} I_{km} − I_{kp} I_{ml}),  k > m > l > p
        PairCase::Crossing => {
            let d = &u(2) - &u(-2);
            NCPoly::from_terms([
                (w2(b, a), QScalar::one()),
                (w2(s(l, p), s(k, m)), d.clone()),
                (w2(s(k, p), s(m, l)), -d),
            ])
        }
    })
}

/// Computes PBW normal forms, memoizing the normal form of
/// `letter · ordered word` products across calls.
#[derive(Default)]
pub struct Normalizer {
    insert_memo: HashMap<(GenSymbol, Word), NCPoly>,
    expand_memo: HashMap<GenSymbol, NCPoly>,
    steps: u64,
}

impl Normalizer {
    pub fn new() -> Self {
        Normalizer::default()
    }

    /// Number of reorder-rule applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Unique combination of ordered monomials equal to `p` in U'_q(so_n).
    pub fn normalize(&mut self, p: &NCPoly, n: u32) -> Result<NCPoly> {
        if p.max_index() > n {
            return Err(Error::IndexOutOfRange(format!("element uses index {} but n = {n}", p.max_index())));
        }
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let nf = self.normalize_word(w);
            out.add_scaled(&nf, c);
        }
        Ok(out.mark_normal())
    }

    fn expand(&mut self, s: GenSymbol) -> NCPoly {
        if s.sign() == Sign::Plus {
            return NCPoly::symbol(s);
        }
        self.expand_memo.entry(s).or_insert_with(|| expand_composite(s)).clone()
    }

    fn normalize_word(&mut self, w: &Word) -> NCPoly {
        if w.is_ordered() {
            return NCPoly::word(w.clone());
        }
        // Normal form of the suffix first, then push each symbol in from the left.
        let mut acc = NCPoly::one();
        for &s in w.symbols().iter().rev() {
            let left = self.expand(s);
            let mut next = NCPoly::zero();
            for (lw, lc) in left.terms() {
                let mut part = acc.clone();
                for &ls in lw.symbols().iter().rev() {
                    part = self.push_left(ls, &part);
                }
                next.add_scaled(&part, lc);
            }
            acc = next;
        }
        acc
    }

    /// Normal form of `s · p` for `s` an `I^+` symbol and `p` in normal form.
    fn push_left(&mut self, s: GenSymbol, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let nf = self.insert(s, w);
            out.add_scaled(&nf, c);
        }
        out
    }

    fn insert(&mut self, s: GenSymbol, w: &Word) -> NCPoly {
        match w.symbols().first() {
            Some(&first) if first.precedes(s) => {}
            _ => {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(s);
                v.extend_from_slice(w.symbols());
                return NCPoly::word(Word(v));
            }
        }
        let key = (s, w.clone());
        if let Some(hit) = self.insert_memo.get(&key) {
            return hit.clone();
        }
        let first = w.symbols()[0];
        let rest = Word(w.symbols()[1..].to_vec());
        self.steps += 1;
        let rule = reorder_rule(s, first).expect("pair is disordered");
        let mut out = NCPoly::zero();
        for (rw, rc) in rule.terms() {
            let mut part = NCPoly::word(rest.clone());
            for &rs in rw.symbols().iter().rev() {
                part = self.push_left(rs, &part);
            }
            out.add_scaled(&part, rc);
        }
        self.insert_memo.insert(key, out.clone());
        out
    }
}

/// PBW normal form of `p` as an element of U'_q(so_n).
pub fn normalize(p: &NCPoly, n: u32) -> Result<NCPoly> {
    Normalizer::new().normalize(p, n)
}

/// `normalize(p·I_{j+1,j} − I_{j+1,j}·p)` for `j = 1..n−1`.
pub fn commutator_residuals(p: &NCPoly, n: u32) -> Result<Vec<NCPoly>> {
    let mut nz = Normalizer::new();
    commutator_residuals_with(&mut nz, p, n)
}

pub fn commutator_residuals_with(nz: &mut Normalizer, p: &NCPoly, n: u32) -> Result<Vec<NCPoly>> {
    let np = nz.normalize(p, n)?;
    (1..n)
        .map(|j| {
            let g = NCPoly::basic(j);
            nz.normalize(&np.mul(&g).sub(&g.mul(&np)), n)
        })
        .collect()
}
