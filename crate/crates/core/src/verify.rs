//! Cross-checks between the symbolic side (PBW normal forms, Casimir
//! constructors, closed-form eigenvalues) and the numeric irreps.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::casimir::{self, CasimirElement, CasimirKind};
use crate::eigen::{chi_2r, chi_top};
use crate::error::{Error, Result};
use crate::gtrep::{coeff_a, enumerate_patterns, CMatrix, HighestWeight, Perturbation, RepMatrixSet};
use crate::pbw::{commutator_residuals, normalize, GenSymbol, NCPoly, Word};
use crate::qnum::QScalar;
use crate::syntax::Sign;

pub const RELATION_TOL: f64 = 1e-9;
pub const SCALAR_TOL: f64 = 1e-9;
pub const EIGEN_TOL: f64 = 1e-8;
/// A perturbed coefficient must push some relative residual above this.
pub const CONTROL_TOL: f64 = 1e-3;
pub const DEFAULT_SYMBOLIC_LIMIT: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationRecord {
    pub weight: String,
    pub q0: f64,
    pub relation: String,
    /// Largest entry magnitude of the residual matrix.
    pub residual: f64,
    /// `Σ |c| Π ‖factor‖₂` over the terms of the relation, an upper bound for
    /// every entry of each side.
    pub scale: f64,
    pub relative: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarnessRecord {
    pub weight: String,
    pub q0: f64,
    pub casimir: String,
    pub dim: usize,
    pub off_diagonal: f64,
    pub spread: f64,
    pub mean_re: f64,
    pub mean_im: f64,
    /// Set when the mean is too small to divide by.
    pub absolute: bool,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRecord {
    pub weight: String,
    pub q0: f64,
    pub casimir: String,
    pub chi_exact: String,
    pub chi_re: f64,
    pub chi_im: f64,
    pub measured_re: f64,
    pub measured_im: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolicStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicRecord {
    pub n: u32,
    pub element: String,
    pub status: SymbolicStatus,
    /// Generators whose commutator with the element has a nonzero normal form.
    pub nonzero: Vec<String>,
    pub limit: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub n: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// A check that must fail; `behaved` records that it did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControlRecord {
    pub name: String,
    pub detail: String,
    pub value: f64,
    pub threshold: f64,
    pub behaved: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JobDescriptor {
    pub n: u32,
    pub weights: Vec<String>,
    pub q0: Vec<f64>,
    pub casimirs: Vec<String>,
    pub symbolic: bool,
    pub symbolic_limit: u32,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub checks: usize,
    pub failures: usize,
    pub skipped: usize,
    pub misbehaving_controls: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub job: JobDescriptor,
    pub relations: Vec<RelationRecord>,
    pub scalarness: Vec<ScalarnessRecord>,
    pub eigenvalues: Vec<EigenRecord>,
    pub symbolic: Vec<SymbolicRecord>,
    pub identities: Vec<IdentityRecord>,
    pub controls: Vec<ControlRecord>,
    pub verdict: Verdict,
}

/// Relation terms: coefficient times an ordered product of symbol matrices.
type Terms = Vec<(Complex64, Vec<GenSymbol>)>;

fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

struct Evaluator<'a> {
    set: &'a RepMatrixSet,
    norms: HashMap<GenSymbol, f64>,
}

impl<'a> Evaluator<'a> {
    fn new(set: &'a RepMatrixSet) -> Self {
        Evaluator { set, norms: HashMap::new() }
    }

    fn norm(&mut self, g: GenSymbol) -> f64 {
        let set = self.set;
        *self.norms.entry(g).or_insert_with(|| spectral_norm(set.symbol_matrix(g)))
    }

    fn record(&mut self, name: String, terms: Terms) -> RelationRecord {
        let set = self.set;
        let d = set.dim();
        let mut sum = CMatrix::zeros(d, d);
        let mut scale = 0.0;
        for (c, syms) in &terms {
            let prod = syms.iter().fold(CMatrix::identity(d, d), |acc, &g| acc * set.symbol_matrix(g));
            sum += prod * *c;
            scale += c.norm() * syms.iter().map(|&g| self.norm(g)).product::<f64>();
        }
        let residual = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let relative = if scale > 0.0 { residual / scale } else { residual };
        RelationRecord {
            weight: set.hw.to_string(),
            q0: set.q0,
            relation: name,
            residual,
            scale,
            relative,
            tolerance: RELATION_TOL,
            pass: relative < RELATION_TOL,
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Trilinear relations, commutation at distance, and both bilinear sets.
pub fn relation_records(set: &RepMatrixSet) -> Vec<RelationRecord> {
    let n = set.n();
    let q0 = set.q0;
    let u = q0.sqrt();
    let b2 = c(q0 + 1.0 / q0);
    let one = c(1.0);
    let g = GenSymbol::basic;
    let mut ev = Evaluator::new(set);
    let mut out = Vec::new();

    for j in 3..=n {
        let (x, y) = (g(j - 1), g(j - 2));
        out.push(ev.record(
            format!("X^2 Y + Y X^2 - [2] X Y X = -Y, X = I({j},{}), Y = I({},{})", j - 1, j - 1, j - 2),
            vec![(one, vec![x, x, y]), (one, vec![y, x, x]), (-b2, vec![x, y, x]), (one, vec![y])],
        ));
        out.push(ev.record(
            format!("Y^2 X + X Y^2 - [2] Y X Y = -X, X = I({j},{}), Y = I({},{})", j - 1, j - 1, j - 2),
            vec![(one, vec![y, y, x]), (one, vec![x, y, y]), (-b2, vec![y, x, y]), (one, vec![x])],
        ));
    }
    for i in 2..=n {
        for j in i + 2..=n {
            let (a, b) = (g(i - 1), g(j - 1));
            out.push(ev.record(
                format!("[I({i},{}), I({j},{})] = 0", i - 1, j - 1),
                vec![(one, vec![a, b]), (-one, vec![b, a])],
            ));
        }
    }
    for sign in [Sign::Plus, Sign::Minus] {
        let s = sign.symbol();
        let (up, down) = if sign == Sign::Plus { (u, 1.0 / u) } else { (1.0 / u, u) };
        let dq = if sign == Sign::Plus { q0 - 1.0 / q0 } else { 1.0 / q0 - q0 };
        let m = |k: u32, l: u32| GenSymbol::new(sign, k, l).expect("indices ordered");
        for k in 3..=n {
            for l in 2..k {
                for mm in 1..l {
                    let (kl, km, lm) = (m(k, l), m(k, mm), m(l, mm));
                    out.push(ev.record(
                        format!("[I{s}({l},{mm}), I{s}({k},{l})]_q{s} = I{s}({k},{mm})"),
                        vec![(c(up), vec![lm, kl]), (c(-down), vec![kl, lm]), (-one, vec![km])],
                    ));
                    out.push(ev.record(
                        format!("[I{s}({k},{l}), I{s}({k},{mm})]_q{s} = I{s}({l},{mm})"),
                        vec![(c(up), vec![kl, km]), (c(-down), vec![km, kl]), (-one, vec![lm])],
                    ));
                    out.push(ev.record(
                        format!("[I{s}({k},{mm}), I{s}({l},{mm})]_q{s} = I{s}({k},{l})"),
                        vec![(c(up), vec![km, lm]), (c(-down), vec![lm, km]), (-one, vec![kl])],
                    ));
                }
            }
        }
        for a in 4..=n {
            for b in 3..a {
                for cc in 2..b {
                    for d in 1..cc {
                        out.push(ev.record(
                            format!("[I{s}({a},{b}), I{s}({cc},{d})] = 0"),
                            vec![(one, vec![m(a, b), m(cc, d)]), (-one, vec![m(cc, d), m(a, b)])],
                        ));
                        out.push(ev.record(
                            format!("[I{s}({a},{d}), I{s}({b},{cc})] = 0"),
                            vec![(one, vec![m(a, d), m(b, cc)]), (-one, vec![m(b, cc), m(a, d)])],
                        ));
                        out.push(ev.record(
                            format!("[I{s}({a},{cc}), I{s}({b},{d})] = (q{s}) (I{s}({cc},{d}) I{s}({a},{b}) - I{s}({a},{d}) I{s}({b},{cc}))"),
                            vec![
                                (one, vec![m(a, cc), m(b, d)]),
                                (-one, vec![m(b, d), m(a, cc)]),
                                (c(-dq), vec![m(cc, d), m(a, b)]),
                                (c(dq), vec![m(a, d), m(b, cc)]),
                            ],
                        ));
                    }
                }
            }
        }
    }
    out
}

/// Residuals of every defining and bilinear relation in the irrep `hw` at `q0`.
pub fn check_relations(hw: &HighestWeight, q0: f64) -> Result<Vec<RelationRecord>> {
    Ok(relation_records(&RepMatrixSet::new(hw, q0)?))
}

/// The closed-form eigenvalue of `kind` on `hw`.
pub fn chi(hw: &HighestWeight, kind: CasimirKind) -> Result<QScalar> {
    match kind {
        CasimirKind::Order(r) => chi_2r(hw, r),
        CasimirKind::Top(s) => chi_top(hw, s),
    }
}

fn check_n(hw: &HighestWeight, c: &CasimirElement) -> Result<()> {
    if c.n != hw.n {
        return Err(Error::InvalidArgument(format!("element for n = {} applied to n = {}", c.n, hw.n)));
    }
    Ok(())
}

fn scalarness_of(set: &RepMatrixSet, c: &CasimirElement, m: &CMatrix) -> ScalarnessRecord {
    let d = m.nrows();
    let mean = m.diagonal().iter().sum::<Complex64>() / c_len(d);
    let mut off = 0.0f64;
    let mut spread = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                spread = spread.max((m[(i, i)] - mean).norm());
            } else {
                off = off.max(m[(i, j)].norm());
            }
        }
    }
    let absolute = mean.norm() < SCALAR_TOL;
    if !absolute {
        off /= mean.norm();
        spread /= mean.norm();
    }
    ScalarnessRecord {
        weight: set.hw.to_string(),
        q0: set.q0,
        casimir: c.kind.label(c.n),
        dim: d,
        off_diagonal: off,
        spread,
        mean_re: mean.re,
        mean_im: mean.im,
        absolute,
        tolerance: SCALAR_TOL,
        pass: off < SCALAR_TOL && spread < SCALAR_TOL,
    }
}

fn c_len(d: usize) -> Complex64 {
    c(d.max(1) as f64)
}

fn eigen_of(set: &RepMatrixSet, c: &CasimirElement, mean: Complex64) -> Result<EigenRecord> {
    let x = chi(&set.hw, c.kind)?;
    let val = x.eval_numeric(Complex64::new(set.q0, 0.0))?;
    let rel_err = (mean - val).norm() / val.norm().max(1.0);
    Ok(EigenRecord {
        weight: set.hw.to_string(),
        q0: set.q0,
        casimir: c.kind.label(c.n),
        chi_exact: x.to_string(),
        chi_re: val.re,
        chi_im: val.im,
        measured_re: mean.re,
        measured_im: mean.im,
        rel_err,
        tolerance: EIGEN_TOL,
        pass: rel_err <= EIGEN_TOL,
    })
}

/// Scalarness and eigenvalue agreement from a single evaluation of `c`.
pub fn check_casimir_in(set: &RepMatrixSet, c: &CasimirElement) -> Result<(ScalarnessRecord, EigenRecord)> {
    check_n(&set.hw, c)?;
    let m = set.element_matrix(&c.body)?;
    let s = scalarness_of(set, c, &m);
    let e = eigen_of(set, c, Complex64::new(s.mean_re, s.mean_im))?;
    Ok((s, e))
}

pub fn check_scalarness(hw: &HighestWeight, c: &CasimirElement, q0: f64) -> Result<ScalarnessRecord> {
    check_n(hw, c)?;
    Ok(check_casimir_in(&RepMatrixSet::new(hw, q0)?, c)?.0)
}

pub fn check_eigenvalue(hw: &HighestWeight, c: &CasimirElement, q0: f64) -> Result<EigenRecord> {
    check_n(hw, c)?;
    Ok(check_casimir_in(&RepMatrixSet::new(hw, q0)?, c)?.1)
}

/// Whether every `[p, I_{j+1,j}]` has zero normal form. Above `limit` the
/// check is not attempted and reports [`SymbolicStatus::Skipped`].
pub fn check_symbolic_centrality(n: u32, name: &str, p: &NCPoly, limit: u32) -> Result<SymbolicRecord> {
    let mut rec =
        SymbolicRecord { n, element: name.to_string(), status: SymbolicStatus::Skipped, nonzero: Vec::new(), limit };
    if n > limit {
        return Ok(rec);
    }
    let residuals = commutator_residuals(p, n)?;
    rec.nonzero = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(j, _)| format!("I({},{})", j + 2, j + 1))
        .collect();
    rec.status = if rec.nonzero.is_empty() { SymbolicStatus::Pass } else { SymbolicStatus::Fail };
    Ok(rec)
}

pub mod golden {
    //! Casimir elements as printed, in element syntax.
    pub const C3_2: &str = include_str!("../golden/c3_2.txt");
    pub const C4_2: &str = include_str!("../golden/c4_2.txt");
    pub const C4_4: &str = include_str!("../golden/c4_4.txt");
    pub const C5_4: &str = include_str!("../golden/c5_4.txt");
    pub const C6_6_PLUS: &str = include_str!("../golden/c6_6plus.txt");

    /// The printed six-index expansion gives this word coefficient 1; the
    /// tensor-operator formula gives `q`, and only the latter is central.
    pub const C6_6_PLUS_MISPRINT: &str = "I+(4,1) I+(5,3) I+(6,2)";

    /// `Σ_{i<j} q^{i+j−n−1} I^+_{ji} I^-_{ji}` for `3 ≤ n ≤ 8`.
    pub fn quadratic(n: u32) -> Option<&'static str> {
        Some(match n {
            3 => include_str!("../golden/c2_n3.txt"),
            4 => include_str!("../golden/c2_n4.txt"),
            5 => include_str!("../golden/c2_n5.txt"),
            6 => include_str!("../golden/c2_n6.txt"),
            7 => include_str!("../golden/c2_n7.txt"),
            8 => include_str!("../golden/c2_n8.txt"),
            _ => return None,
        })
    }
}

fn identity(n: u32, name: &str, pass: bool, detail: impl Into<String>) -> IdentityRecord {
    IdentityRecord { n, name: name.to_string(), pass, detail: detail.into() }
}

fn parse_lines(text: &str) -> Result<Vec<NCPoly>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(str::parse).collect()
}

/// The printed Casimir forms of `n`, as exact equalities.
pub fn check_identities(n: u32) -> Result<Vec<IdentityRecord>> {
    let mut out = Vec::new();
    if n == 3 {
        let forms = parse_lines(golden::C3_2)?;
        let a = normalize(&forms[0], 3)?;
        let b = normalize(&forms[1], 3)?;
        let built = normalize(&casimir::build_c2r(3, 1)?.body, 3)?;
        out.push(identity(3, "C(2)_3 printed forms agree", a == b, format!("normal form: {a}")));
        out.push(identity(3, "C(2)_3 constructor matches printed form", built == a, ""));
    }
    if n == 4 {
        let forms = parse_lines(golden::C4_4)?;
        let plus = casimir::build_ctop(4, Sign::Plus)?.body;
        let minus = casimir::build_ctop(4, Sign::Minus)?.body;
        out.push(identity(4, "C(4)+_4 constructor matches printed form", plus == forms[0], ""));
        out.push(identity(4, "C(4)-_4 constructor matches printed form", minus == forms[1], ""));
        let (a, b) = (normalize(&plus, 4)?, normalize(&minus, 4)?);
        out.push(identity(4, "C(4)+_4 = C(4)-_4", a == b, format!("normal form: {a}")));
        let printed = parse_lines(golden::C4_2)?.remove(0);
        let built = casimir::build_c2r(4, 1)?.body;
        out.push(identity(4, "C(2)_4 constructor matches printed form", built == printed, ""));
    }
    if let Some(text) = golden::quadratic(n) {
        let printed = parse_lines(text)?.remove(0);
        let built = casimir::build_c2r(n, 1)?.body;
        out.push(identity(
            n,
            "C(2)_n matches the printed quadratic Casimir",
            built == printed,
            format!("{} terms", printed.len()),
        ));
    }
    if n == 5 {
        let printed = parse_lines(golden::C5_4)?.remove(0);
        let built = casimir::build_c2r(5, 2)?.body;
        out.push(identity(
            5,
            "C(4)_5 constructor matches printed form",
            built == printed,
            format!("{} terms", printed.len()),
        ));
    }
    if n == 6 {
        let diff = c6_top_mismatches()?;
        let detail: Vec<String> = diff.iter().map(|(w, p, b)| format!("{w}: printed {p}, constructor {b}")).collect();
        let only_misprint = diff.len() == 1 && diff[0].0.to_string() == golden::C6_6_PLUS_MISPRINT;
        out.push(identity(
            6,
            "C(6)+_6 matches the printed expansion apart from its one misprinted coefficient",
            only_misprint,
            detail.join("; "),
        ));
    }
    if n.is_multiple_of(2) && n >= 2 {
        let full = casimir::build_c2r(n, n / 2)?.body;
        let prod = casimir::build_ctop(n, Sign::Plus)?.body.mul(&casimir::build_ctop(n, Sign::Minus)?.body);
        // Identical bodies have identical normal forms; normalize only when they differ.
        let pass = full == prod || normalize(&full, n)? == normalize(&prod, n)?;
        out.push(identity(n, "C(n)_n = C(n)+_n C(n)-_n", pass, ""));
    }
    Ok(out)
}

/// Words where the printed `C^{(6)+}_6` and the constructor disagree, with
/// `(printed, constructor)` coefficients.
pub fn c6_top_mismatches() -> Result<Vec<(Word, QScalar, QScalar)>> {
    let printed = golden::C6_6_PLUS.parse::<NCPoly>()?;
    let built = casimir::build_ctop(6, Sign::Plus)?.body;
    let mut words: Vec<&Word> = printed.terms().map(|(w, _)| w).chain(built.terms().map(|(w, _)| w)).collect();
    words.sort();
    words.dedup();
    Ok(words
        .into_iter()
        .filter(|w| printed.coeff(w) != built.coeff(w))
        .map(|w| (w.clone(), printed.coeff(w), built.coeff(w)))
        .collect())
}

/// `chi_2r(hw, n/2) = chi_top(hw)²` for each weight (even `n`).
pub fn check_top_square(weights: &[HighestWeight]) -> Result<Vec<IdentityRecord>> {
    weights
        .iter()
        .filter(|hw| hw.n % 2 == 0)
        .map(|hw| {
            let t = chi_top(hw, Sign::Plus)?;
            let pass = chi_2r(hw, hw.n / 2)? == &t * &t;
            Ok(identity(hw.n, &format!("chi(n) = chi(n)+^2 at {hw}"), pass, ""))
        })
        .collect()
}

/// Every nonzero A-coefficient of the irrep as `(pattern, p, r)`.
pub fn nonzero_a_coefficients(hw: &HighestWeight, q0: f64) -> Result<Vec<Perturbation>> {
    let mut out = Vec::new();
    for alpha in enumerate_patterns(hw)? {
        for p in 1..=(hw.n - 1) / 2 {
            for r in 0..alpha.row(2 * p).len() {
                if coeff_a(&alpha, r, p, q0)? != 0.0 {
                    out.push(Perturbation { pattern: alpha.clone(), p, r, factor: 1.01 });
                }
            }
        }
    }
    Ok(out)
}

/// Largest relative residual once `tweak` is applied.
pub fn perturbed_residual(hw: &HighestWeight, q0: f64, tweak: &Perturbation) -> Result<f64> {
    let set = RepMatrixSet::with_perturbation(hw, q0, Some(tweak))?;
    Ok(relation_records(&set).iter().map(|r| r.relative).fold(0.0, f64::max))
}

/// Scales one A-coefficient, chosen by `seed`, by 1.01; the relations must break.
pub fn perturbation_control(hw: &HighestWeight, q0: f64, seed: u64) -> Result<Option<ControlRecord>> {
    let candidates = nonzero_a_coefficients(hw, q0)?;
    if candidates.is_empty() {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tweak = &candidates[rng.gen_range(0..candidates.len())];
    let value = perturbed_residual(hw, q0, tweak)?;
    Ok(Some(ControlRecord {
        name: "perturbed A coefficient".into(),
        detail: format!("{hw} q0={q0} A^{}_{} at {:?} x1.01", tweak.r + 1, 2 * tweak.p, tweak.pattern),
        value,
        threshold: CONTROL_TOL,
        behaved: value > CONTROL_TOL,
    }))
}

/// `I_{21}` is not central; the symbolic check must say so.
pub fn noncentral_control(n: u32) -> Result<Option<ControlRecord>> {
    if n < 3 {
        return Ok(None);
    }
    let rec = check_symbolic_centrality(n.min(4), "I(2,1)", &NCPoly::basic(1), u32::MAX)?;
    Ok(Some(ControlRecord {
        name: "non-central element".into(),
        detail: format!("I(2,1) in n = {}: {:?}", n.min(4), rec.status),
        value: rec.nonzero.len() as f64,
        threshold: 0.0,
        behaved: rec.status == SymbolicStatus::Fail,
    }))
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n: u32,
    pub weights: Vec<HighestWeight>,
    pub q0: Vec<f64>,
    pub kinds: Vec<CasimirKind>,
    pub symbolic: bool,
    pub symbolic_limit: u32,
    pub seed: u64,
    pub controls: bool,
}

impl VerifyConfig {
    pub fn new(n: u32, weights: Vec<HighestWeight>) -> Self {
        VerifyConfig {
            n,
            weights,
            q0: vec![1.2, 0.85, 2.0],
            kinds: casimir::all_kinds(n),
            symbolic: false,
            symbolic_limit: DEFAULT_SYMBOLIC_LIMIT,
            seed: 0,
            controls: true,
        }
    }
}

struct JobOut {
    relations: Vec<RelationRecord>,
    scalarness: Vec<ScalarnessRecord>,
    eigenvalues: Vec<EigenRecord>,
}

/// Runs the configured battery. Jobs `(hw, q0)` run on the current rayon
/// pool; results are assembled in input order.
pub fn run(config: &VerifyConfig) -> Result<VerificationReport> {
    if let Some(hw) = config.weights.iter().find(|hw| hw.n != config.n) {
        return Err(Error::InvalidArgument(format!("weight {hw:?} does not belong to n = {}", config.n)));
    }
    let elements = config.kinds.iter().map(|&k| casimir::build(config.n, k)).collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&HighestWeight, f64)> =
        config.weights.iter().flat_map(|hw| config.q0.iter().map(move |&q| (hw, q))).collect();
    let outs = jobs
        .par_iter()
        .map(|&(hw, q0)| {
            let set = RepMatrixSet::new(hw, q0)?;
            let relations = relation_records(&set);
            let mut scalarness = Vec::new();
            let mut eigenvalues = Vec::new();
            for c in &elements {
                let (s, e) = check_casimir_in(&set, c)?;
                scalarness.push(s);
                eigenvalues.push(e);
            }
            Ok(JobOut { relations, scalarness, eigenvalues })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut symbolic = Vec::new();
    if config.symbolic {
        for c in &elements {
            symbolic.push(check_symbolic_centrality(config.n, &c.kind.label(c.n), &c.body, config.symbolic_limit)?);
        }
    }
    let mut identities = check_identities(config.n)?;
    identities.extend(check_top_square(&config.weights)?);

    let mut controls = Vec::new();
    if config.controls {
        if let (Some(hw), Some(&q0)) = (config.weights.iter().rev().find(|hw| hw.n >= 3), config.q0.first()) {
            controls.extend(perturbation_control(hw, q0, config.seed)?);
        }
        if config.symbolic {
            controls.extend(noncentral_control(config.n)?);
        }
    }

    let mut report = VerificationReport {
        job: JobDescriptor {
            n: config.n,
            weights: config.weights.iter().map(|w| w.to_string()).collect(),
            q0: config.q0.clone(),
            casimirs: config.kinds.iter().map(|k| k.label(config.n)).collect(),
            symbolic: config.symbolic,
            symbolic_limit: config.symbolic_limit,
            seed: config.seed,
        },
        relations: Vec::new(),
        scalarness: Vec::new(),
        eigenvalues: Vec::new(),
        symbolic,
        identities,
        controls,
        verdict: Verdict { pass: false, checks: 0, failures: 0, skipped: 0, misbehaving_controls: 0 },
    };
    for o in outs {
        report.relations.extend(o.relations);
        report.scalarness.extend(o.scalarness);
        report.eigenvalues.extend(o.eigenvalues);
    }
    report.verdict = verdict(&report);
    Ok(report)
}

/// Pure function of the tables.
pub fn verdict(r: &VerificationReport) -> Verdict {
    let flags: Vec<bool> = r
        .relations
        .iter()
        .map(|x| x.pass)
        .chain(r.scalarness.iter().map(|x| x.pass))
        .chain(r.eigenvalues.iter().map(|x| x.pass))
        .chain(r.identities.iter().map(|x| x.pass))
        .chain(
            r.symbolic.iter().filter(|x| x.status != SymbolicStatus::Skipped).map(|x| x.status == SymbolicStatus::Pass),
        )
        .collect();
    let failures = flags.iter().filter(|&&p| !p).count();
    let skipped = r.symbolic.iter().filter(|x| x.status == SymbolicStatus::Skipped).count();
    let misbehaving = r.controls.iter().filter(|c| !c.behaved).count();
    Verdict {
        pass: failures == 0 && misbehaving == 0,
        checks: flags.len(),
        failures,
        skipped,
        misbehaving_controls: misbehaving,
    }
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable summary; `digits` controls the printed precision.
    pub fn to_text(&self, digits: usize) -> String {
        let mut s = String::new();
        let j = &self.job;
        let _ = writeln!(s, "n = {}  weights = [{}]  q0 = {:?}", j.n, j.weights.join(" "), j.q0);
        let worst = self.relations.iter().map(|r| r.relative).fold(0.0, f64::max);
        let failed = self.relations.iter().filter(|r| !r.pass).count();
        let _ = writeln!(
            s,
            "relations: {} checked, {failed} failed, worst relative residual {worst:.digits$e}",
            self.relations.len()
        );
        let _ = writeln!(
            s,
            "{:<10} {:<8} {:<10} {:>14} {:>14} {:>12} {:>12}  ok",
            "weight", "q0", "casimir", "measured", "chi", "rel_err", "spread"
        );
        for (e, sc) in self.eigenvalues.iter().zip(&self.scalarness) {
            let _ = writeln!(
                s,
                "{:<10} {:<8} {:<10} {:>14} {:>14} {:>12.3e} {:>12.3e}  {}",
                e.weight,
                e.q0,
                e.casimir,
                fmt_complex(e.measured_re, e.measured_im, digits),
                fmt_complex(e.chi_re, e.chi_im, digits),
                e.rel_err,
                sc.spread.max(sc.off_diagonal),
                if e.pass && sc.pass { "yes" } else { "NO" }
            );
        }
        for x in &self.symbolic {
            let _ = writeln!(s, "symbolic {} (n = {}): {:?}", x.element, x.n, x.status);
        }
        for x in &self.identities {
            let _ = writeln!(s, "identity {}: {}", x.name, if x.pass { "holds" } else { "FAILS" });
        }
        for x in &self.controls {
            let _ = writeln!(
                s,
                "control {}: value {:.3e}, {}",
                x.name,
                x.value,
                if x.behaved { "failed as required" } else { "DID NOT FAIL" }
            );
        }
        let v = &self.verdict;
        let _ = writeln!(
            s,
            "verdict: {} ({} checks, {} failures, {} skipped, {} misbehaving controls)",
            if v.pass { "PASS" } else { "FAIL" },
            v.checks,
            v.failures,
            v.skipped,
            v.misbehaving_controls
        );
        s
    }
}

pub fn fmt_complex(re: f64, im: f64, digits: usize) -> String {
    if im == 0.0 {
        format!("{re:.digits$}")
    } else if re == 0.0 {
        format!("{im:.digits$}i")
    } else {
        format!("{re:.digits$}{im:+.digits$}i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(n: u32, s: &str) -> HighestWeight {
        HighestWeight::parse(n, s).unwrap()
    }

    #[test]
    fn relation_examples() {
        let recs = check_relations(&hw(3, "1"), 1.2).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.residual < 1e-12), "{recs:#?}");
        assert!(check_relations(&hw(2, "1"), 1.2).unwrap().is_empty());
    }

    #[test]
    fn perturbed_coefficient_breaks_relations() {
        let h = hw(3, "1");
        let tweak = &nonzero_a_coefficients(&h, 1.2).unwrap()[0];
        assert!(perturbed_residual(&h, 1.2, tweak).unwrap() > CONTROL_TOL);
        assert!(perturbation_control(&h, 1.2, 7).unwrap().unwrap().behaved);
    }

    #[test]
    fn scalarness_and_eigen_examples() {
        let c3 = casimir::build_c2r(3, 1).unwrap();
        let s = check_scalarness(&hw(3, "1"), &c3, 1.2).unwrap();
        assert!(s.pass, "{s:?}");
        let e = check_eigenvalue(&hw(3, "1"), &c3, 1.2).unwrap();
        let want = -(1.2 + 1.0 / 1.2);
        assert!((e.measured_re - want).abs() < 1e-9 && e.pass, "{e:?}");
        assert!(check_scalarness(&hw(3, "0"), &c3, 1.2).unwrap().pass);

        let c5 = casimir::build_c2r(5, 2).unwrap();
        let s = check_scalarness(&hw(5, "1,0"), &c5, 1.2).unwrap();
        assert!(s.pass && s.mean_re.abs() < 1e-9, "{s:?}");

        let top = casimir::build_ctop(4, Sign::Plus).unwrap();
        let e = check_eigenvalue(&hw(4, "1,1"), &top, 0.85).unwrap();
        assert!(e.pass && (e.measured_re + (0.85 + 1.0 / 0.85)).abs() < 1e-9, "{e:?}");
        let e = check_eigenvalue(&hw(4, "1,0"), &top, 0.85).unwrap();
        assert!(e.pass && e.measured_re.abs() < 1e-9);
        assert!(check_eigenvalue(&hw(3, "1"), &top, 0.85).is_err());
    }

    #[test]
    fn symbolic_examples() {
        let c3 = casimir::build_c2r(3, 1).unwrap();
        assert_eq!(check_symbolic_centrality(3, "C", &c3.body, 4).unwrap().status, SymbolicStatus::Pass);
        let g = NCPoly::basic(1);
        assert_eq!(check_symbolic_centrality(3, "I", &g, 4).unwrap().status, SymbolicStatus::Fail);
        assert_eq!(check_symbolic_centrality(5, "C", &c3.body, 4).unwrap().status, SymbolicStatus::Skipped);
    }

    #[test]
    fn identities_small() {
        for n in [3, 4, 5, 6] {
            let recs = check_identities(n).unwrap();
            assert!(!recs.is_empty());
            assert!(recs.iter().all(|r| r.pass), "{recs:#?}");
        }
    }

    #[test]
    fn report_is_deterministic() {
        let mut cfg = VerifyConfig::new(3, vec![hw(3, "1"), hw(3, "1/2")]);
        cfg.symbolic = true;
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert!(a.verdict.pass, "{}", a.to_text(6));
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.controls.len(), 2);
    }
}
