use proptest::prelude::*;
use qso::gtrep::{CMatrix, HighestWeight, RepMatrixSet};
use qso::pbw::{normalize, qcomm, GenSymbol, NCPoly, Normalizer, Word};
use qso::qnum::QScalar;
use qso::syntax::Sign;

fn symbol(n: u32) -> impl Strategy<Value = GenSymbol> {
    (2..=n)
        .prop_flat_map(|k| (Just(k), 1..k, any::<bool>()))
        .prop_map(|(k, l, plus)| GenSymbol::new(if plus { Sign::Plus } else { Sign::Minus }, k, l).unwrap())
}

fn word(n: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(symbol(n), 1..=max_len).prop_map(Word)
}

/// Two words over the same n whose product has at most four symbols.
fn word_pair() -> impl Strategy<Value = (u32, Word, Word)> {
    (3u32..=5).prop_flat_map(|n| (Just(n), word(n, 2), word(n, 2)))
}

fn battery_weight(n: u32) -> HighestWeight {
    let w = match n {
        3 => "3/2",
        4 => "1,0",
        _ => "1,1",
    };
    HighestWeight::parse(n, w).unwrap()
}

fn rel_diff(a: &CMatrix, b: &CMatrix, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1.0)
}

fn p(s: &str) -> NCPoly {
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_form_is_idempotent((n, w1, w2) in word_pair()) {
        let x = NCPoly::word(w1.concat(&w2));
        let once = normalize(&x, n).unwrap();
        prop_assert!(once.is_normal_form());
        prop_assert_eq!(normalize(&once, n).unwrap(), once);
    }

    #[test]
    fn normal_form_agrees_with_matrices((n, w1, w2) in word_pair(), low_q in any::<bool>()) {
        let q0 = if low_q { 0.85 } else { 1.2 };
        let set = RepMatrixSet::new(&battery_weight(n), q0).unwrap();
        let (a, b) = (set.word_matrix(&w1).unwrap(), set.word_matrix(&w2).unwrap());
        let product = &a * &b;
        let nf = normalize(&NCPoly::word(w1.concat(&w2)), n).unwrap();
        let via_nf = set.element_matrix(&nf).unwrap();
        let err = rel_diff(&via_nf, &product, a.norm() * b.norm());
        prop_assert!(err < 1e-9, "relative error {err:e} for {w1} * {w2}");
    }

    #[test]
    fn rewriting_terminates_within_bound((n, w) in (3u32..=5).prop_flat_map(|n| (Just(n), word(n, 4)))) {
        let mut nz = Normalizer::new();
        nz.normalize(&NCPoly::word(w.clone()), n).unwrap();
        prop_assert!(nz.steps() <= 20_000, "{} steps for {w}", nz.steps());
    }
}

/// Relations of the + family, each written as an element that must vanish.
fn plus_relations(n: u32) -> Vec<NCPoly> {
    let m = |k: u32, l: u32| NCPoly::symbol(GenSymbol::plus(k, l));
    let dq = QScalar::u_pow(2) - QScalar::u_pow(-2);
    let mut out = Vec::new();
    for k in 3..=n {
        for l in 2..k {
            for mm in 1..l {
                out.push(qcomm(&m(l, mm), &m(k, l), Sign::Plus).sub(&m(k, mm)));
                out.push(qcomm(&m(k, l), &m(k, mm), Sign::Plus).sub(&m(l, mm)));
                out.push(qcomm(&m(k, mm), &m(l, mm), Sign::Plus).sub(&m(k, l)));
            }
        }
    }
    for a in 4..=n {
        for b in 3..a {
            for c in 2..b {
                for d in 1..c {
                    out.push(m(a, b).mul(&m(c, d)).sub(&m(c, d).mul(&m(a, b))));
                    out.push(m(a, d).mul(&m(b, c)).sub(&m(b, c).mul(&m(a, d))));
                    let comm = m(a, c).mul(&m(b, d)).sub(&m(b, d).mul(&m(a, c)));
                    let rhs = m(c, d).mul(&m(a, b)).sub(&m(a, d).mul(&m(b, c))).scale(&dq);
                    out.push(comm.sub(&rhs));
                }
            }
        }
    }
    out
}

#[test]
fn relations_and_their_duals_vanish() {
    for n in 3..=5 {
        let rels = plus_relations(n);
        assert!(!rels.is_empty());
        for q0 in [1.2, 0.85] {
            let set = RepMatrixSet::new(&battery_weight(n), q0).unwrap();
            let scale = set.generators().iter().map(|g| g.norm()).fold(1.0, f64::max).powi(2);
            for r in &rels {
                for x in [r.clone(), r.dual()] {
                    let m = set.element_matrix(&x).unwrap();
                    assert!(m.norm() / scale < 1e-9, "n = {n}, q0 = {q0}: {x}");
                }
            }
        }
        for r in &rels {
            assert!(normalize(r, n).unwrap().is_zero(), "{r}");
            assert!(normalize(&r.dual(), n).unwrap().is_zero(), "{}", r.dual());
        }
    }
}

#[test]
fn trilinear_relations_normalize_to_zero() {
    let b2 = QScalar::u_pow(2) + QScalar::u_pow(-2);
    for n in 3..=6 {
        for j in 3..=n {
            let x = NCPoly::basic(j - 1);
            let y = NCPoly::basic(j - 2);
            for (a, b) in [(&x, &y), (&y, &x)] {
                let rel = a.mul(a).mul(b).add(&b.mul(a).mul(a)).sub(&a.mul(b).mul(a).scale(&b2)).add(b);
                assert!(normalize(&rel, n).unwrap().is_zero(), "n = {n}, j = {j}");
            }
        }
        for i in 1..n {
            for j in i + 2..n {
                let c = NCPoly::basic(i).mul(&NCPoly::basic(j)).sub(&NCPoly::basic(j).mul(&NCPoly::basic(i)));
                assert!(normalize(&c, n).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn parser_round_trips_normal_forms() {
    let x = p("I(3,2) I(2,1) I+(3,1) - u^2 I-(4,1) I(2,1)");
    let nf = normalize(&x, 4).unwrap();
    assert_eq!(nf.to_string().parse::<NCPoly>().unwrap(), nf);
    assert!(normalize(&p("I+(2,1) I+(3,1) I+(3,2)"), 3).unwrap().is_normal_form());
}
