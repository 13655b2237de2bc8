#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use quadtame::poly::Monomial;
use quadtame::{Generator, Letter, QElem, QPoly, QuadExt, Rational, Ring, Valuation, Word};

pub fn rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

/// Up to `terms` monomials of total degree at most `deg`.
pub fn poly(deg: u32, terms: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(([0..=deg, 0..=deg, 0..=deg, 0..=deg], nonzero_rat()), 0..=terms).prop_map(move |ts| {
        QPoly::from_terms(
            ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= deg).map(|(e, c)| (Monomial::new(e), c)),
        )
    })
}

pub fn nonzero_poly(deg: u32, terms: usize) -> impl Strategy<Value = QPoly> {
    poly(deg, terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Polynomial in `x, y` only.
pub fn poly_xy(deg: u32, terms: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(((0..=deg, 0..=deg), nonzero_rat()), 0..=terms).prop_map(move |ts| {
        QPoly::from_terms(
            ts.into_iter().filter(|((a, b), _)| a + b <= deg).map(|((a, b), c)| (Monomial::new([a, b, 0, 0]), c)),
        )
    })
}

pub fn elem(deg: u32, terms: usize) -> impl Strategy<Value = QElem> {
    poly(deg, terms).prop_map(|p| Ring::default().reduce(&p))
}

pub fn nonzero_elem(deg: u32, terms: usize) -> impl Strategy<Value = QElem> {
    nonzero_poly(deg, terms).prop_map(|p| Ring::default().reduce(&p)).prop_filter("nonzero", |e| !e.is_zero())
}

pub fn nonconstant_elem(deg: u32, terms: usize) -> impl Strategy<Value = QElem> {
    elem(deg, terms).prop_filter("nonconstant", |e| !e.is_constant())
}

pub fn q(s: &str) -> QuadExt {
    s.parse().unwrap()
}

/// Balanced negative rational weights with `alpha0 + alpha3 = alpha1 + alpha2`.
pub fn balanced_weights() -> impl Strategy<Value = [QuadExt; 4]> {
    (1i64..=12, 1i64..=12).prop_flat_map(|(k1, k2)| (Just(k1), Just(k2), 1..(k1 + k2))).prop_map(|(k1, k2, k0)| {
        let w = |k: i64| QuadExt::rational(Rational::new(-k, 6));
        [w(k0), w(k1), w(k2), w(k1 + k2 - k0)]
    })
}

/// Weights used throughout: minus the degree, two rational examples, a
/// balanced asymmetric choice, and an irrational one.
pub fn fixed_valuations() -> Vec<Valuation> {
    let z = || Default::default();
    vec![
        Valuation::minus_degree(),
        Valuation::from_parts(z(), ["-1/2", "-3/5", "-9/10", "-1"].map(q)).unwrap(),
        Valuation::from_parts(z(), ["-1", "-4/5", "-3/4", "-11/20"].map(q)).unwrap(),
        Valuation::from_parts(z(), ["-1", "-r2", "-r2", "1-2*r2"].map(q)).unwrap(),
        Valuation::from_parts(z(), ["-2", "-1", "-3", "-2"].map(q)).unwrap(),
    ]
}

pub fn valuation() -> impl Strategy<Value = Valuation> {
    prop_oneof![
        (0..5usize).prop_map(|i| fixed_valuations()[i].clone()),
        balanced_weights().prop_map(|a| Valuation::from_parts(Default::default(), a).unwrap()),
    ]
}

pub fn ev(p: &str) -> Generator {
    Generator::ev(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
}

pub fn eh(p: &str) -> Generator {
    Generator::eh(Rational::one(), Rational::one(), p.parse().unwrap()).unwrap()
}

/// Swap of `x` and `t`.
pub fn swap_xt() -> Generator {
    let mut m: [[Rational; 4]; 4] = Default::default();
    for (i, j) in [(0, 3), (1, 1), (2, 2), (3, 0)] {
        m[i][j] = Rational::one();
    }
    Generator::orth(m).unwrap()
}

pub fn table() -> BTreeMap<String, Generator> {
    let mut t = BTreeMap::new();
    t.insert("s".to_string(), Generator::sigma());
    t.insert("w".to_string(), swap_xt());
    t.insert("d".to_string(), Generator::diag(Rational::from_int(2), Rational::new(-1, 3)).unwrap());
    t.insert("e1".to_string(), ev("y^2"));
    t.insert("e2".to_string(), ev("x*y - 1"));
    t.insert(
        "e3".to_string(),
        Generator::ev(Rational::from_int(-1), Rational::new(1, 2), "x + 2*y".parse().unwrap()).unwrap(),
    );
    t.insert("h1".to_string(), eh("z^2"));
    t.insert("h2".to_string(), eh("x*z + 1"));
    t.insert(
        "h3".to_string(),
        Generator::eh(Rational::from_int(3), Rational::from_int(-1), "x - z".parse().unwrap()).unwrap(),
    );
    t
}

pub fn letter() -> impl Strategy<Value = Letter> {
    let names: Vec<String> = table().keys().cloned().collect();
    (prop::sample::select(names), any::<bool>()).prop_map(|(name, inverse)| Letter { name, inverse })
}

pub fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max_len).prop_map(|ls| Word::new(table(), ls).unwrap())
}
