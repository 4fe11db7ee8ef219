use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::coeff::{coeff_a_with, coeff_b, coeff_c, imag, Perturbation};
use super::pattern::{enumerate_patterns, GTPattern};
use super::weight::HighestWeight;
use crate::error::{Error, Result};
use crate::pbw::{GenSymbol, NCPoly, Word};
use crate::syntax::Sign;

pub type CMatrix = DMatrix<Complex64>;

/// Generator matrices of one irrep at one `q0`, together with every
/// composite `I^±_{k,l}` built from them.
#[derive(Clone, Debug)]
pub struct RepMatrixSet {
    pub hw: HighestWeight,
    pub q0: f64,
    pub patterns: Vec<GTPattern>,
    index: HashMap<GTPattern, usize>,
    /// `gens[j−1]` represents `I_{j+1,j}`.
    gens: Vec<CMatrix>,
    composites: HashMap<GenSymbol, CMatrix>,
}

impl RepMatrixSet {
    pub fn new(hw: &HighestWeight, q0: f64) -> Result<Self> {
        RepMatrixSet::with_perturbation(hw, q0, None)
    }

    /// As [`RepMatrixSet::new`], with one A-coefficient scaled.
    pub fn with_perturbation(hw: &HighestWeight, q0: f64, tweak: Option<&Perturbation>) -> Result<Self> {
        let patterns = enumerate_patterns(hw)?;
        let index: HashMap<GTPattern, usize> = patterns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let gens = (1..hw.n).map(|j| build_generator(&patterns, &index, j, q0, tweak)).collect::<Result<Vec<_>>>()?;
        let mut set = RepMatrixSet { hw: hw.clone(), q0, patterns, index, gens, composites: HashMap::new() };
        set.build_composites();
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.patterns.len()
    }

    pub fn n(&self) -> u32 {
        self.hw.n
    }

    pub fn pattern_position(&self, p: &GTPattern) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `T(I_{j+1,j})`.
    pub fn generator(&self, j: u32) -> &CMatrix {
        &self.gens[(j - 1) as usize]
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.gens
    }

    /// `I^±_{k,l} = [I_{l+1,l}, I^±_{k,l+1}]_{q^{±1}}`, built by increasing `k − l`.
    fn build_composites(&mut self) {
        let u = self.q0.sqrt();
        let n = self.hw.n;
        for gap in 2..n {
            for l in 1..=n - gap {
                let k = l + gap;
                for sign in [Sign::Plus, Sign::Minus] {
                    let x = self.generator(l).clone();
                    let y = self.symbol_matrix(GenSymbol::new(sign, k, l + 1).expect("valid")).clone();
                    let s = u.powi(sign.unit() as i32);
                    let m = (&x * &y) * Complex64::from(s) - (&y * &x) * Complex64::from(1.0 / s);
                    self.composites.insert(GenSymbol::new(sign, k, l).expect("valid"), m);
                }
            }
        }
    }

    /// Matrix of any symbol with indices `≤ n`.
    pub fn symbol_matrix(&self, s: GenSymbol) -> &CMatrix {
        if s.is_basic() {
            self.generator(s.lower())
        } else {
            &self.composites[&s]
        }
    }

    /// Matrix of a word; the empty word maps to the identity.
    pub fn word_matrix(&self, w: &Word) -> Result<CMatrix> {
        self.check_word(w)?;
        let d = self.dim();
        let mut syms = w.symbols().iter();
        let Some(&first) = syms.next() else {
            return Ok(CMatrix::identity(d, d));
        };
        let mut acc = self.symbol_matrix(first).clone();
        for &s in syms {
            acc = mul_sparse_right(&acc, self.symbol_matrix(s));
        }
        Ok(acc)
    }

    /// Evaluates `p` with every coefficient taken at `q0`.
    pub fn element_matrix(&self, p: &NCPoly) -> Result<CMatrix> {
        let d = self.dim();
        let q0 = Complex64::new(self.q0, 0.0);
        let mut out = CMatrix::zeros(d, d);
        for (w, c) in p.terms() {
            let coeff = c.eval_numeric(q0)?;
            out += self.word_matrix(w)? * coeff;
        }
        Ok(out)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.max_index() > self.hw.n {
            return Err(Error::IndexOutOfRange(format!("word {w} uses indices above n = {}", self.hw.n)));
        }
        Ok(())
    }

    /// Plain-text dump of `T(I_{j+1,j})`: a header line, then one row per line
    /// with entries written as `re,im`.
    pub fn dump_generator(&self, j: u32) -> String {
        let mut out = format!("# hw={} n={} q0={} generator=I({},{})\n", self.hw, self.hw.n, self.q0, j + 1, j);
        write_matrix(&mut out, self.generator(j));
        out
    }
}

pub fn write_matrix(out: &mut String, m: &CMatrix) {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.15e},{:.15e}", m[(i, j)].re, m[(i, j)].im)).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// `a · b`, skipping the zero entries of `b`.
fn mul_sparse_right(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows(), b.ncols());
    for j in 0..b.ncols() {
        for k in 0..b.nrows() {
            let bkj = b[(k, j)];
            if bkj.re == 0.0 && bkj.im == 0.0 {
                continue;
            }
            let src = a.column(k);
            let mut dst = out.column_mut(j);
            dst.axpy(bkj, &src, Complex64::new(1.0, 0.0));
        }
    }
    out
}

fn build_generator(
    patterns: &[GTPattern],
    index: &HashMap<GTPattern, usize>,
    j: u32,
    q0: f64,
    tweak: Option<&Perturbation>,
) -> Result<CMatrix> {
    let d = patterns.len();
    let mut m = CMatrix::zeros(d, d);
    for (a, alpha) in patterns.iter().enumerate() {
        if j.is_multiple_of(2) {
            // I_{2p+1,2p}: shifts in row 2p
            let p = j / 2;
            for r in 0..alpha.row(j).len() {
                if let Some(&up) = index.get(&alpha.shifted(j, r, 1)) {
                    m[(up, a)] += coeff_a_with(alpha, r, p, q0, tweak)?;
                }
                let down = alpha.shifted(j, r, -1);
                if let Some(&dn) = index.get(&down) {
                    m[(dn, a)] -= coeff_a_with(&down, r, p, q0, tweak)?;
                }
            }
        } else {
            // I_{2p,2p−1}: shifts in row 2p−1 plus the diagonal i·C
            let p = j.div_ceil(2);
            if p > 1 {
                for r in 0..alpha.row(j).len() {
                    if let Some(&up) = index.get(&alpha.shifted(j, r, 1)) {
                        m[(up, a)] += coeff_b(alpha, r, p, q0)?;
                    }
                    let down = alpha.shifted(j, r, -1);
                    if let Some(&dn) = index.get(&down) {
                        m[(dn, a)] -= coeff_b(&down, r, p, q0)?;
                    }
                }
            }
            m[(a, a)] += imag(coeff_c(alpha, p, q0)?);
        }
    }
    Ok(m)
}

/// `T(I_{j+1,j})` for the irrep `hw` at `q0`.
pub fn generator_matrix(hw: &HighestWeight, j: u32, q0: f64) -> Result<CMatrix> {
    if j < 1 || j >= hw.n {
        return Err(Error::IndexOutOfRange(format!("generator I({},{}) for n = {}", j + 1, j, hw.n)));
    }
    let patterns = enumerate_patterns(hw)?;
    let index = patterns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    build_generator(&patterns, &index, j, q0, None)
}

/// Evaluates `p` in the irrep `hw` at `q0`.
pub fn element_matrix(hw: &HighestWeight, p: &NCPoly, q0: f64) -> Result<CMatrix> {
    if p.max_index() > hw.n {
        return Err(Error::IndexOutOfRange(format!("element uses indices above n = {}", hw.n)));
    }
    RepMatrixSet::new(hw, q0)?.element_matrix(p)
}
