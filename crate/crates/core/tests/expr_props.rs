use hobo_core::expr::{Monomial, Polynomial};
use proptest::prelude::*;

/// Unreduced expression tree, evaluated with plain integer arithmetic.
#[derive(Debug, Clone)]
enum Tree {
    Var(usize),
    Const(i64),
    Add(Box<Tree>, Box<Tree>),
    Sub(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Pow(Box<Tree>, u32),
}

impl Tree {
    fn eval(&self, x: &[u8]) -> i64 {
        match self {
            Tree::Var(v) => i64::from(x[*v]),
            Tree::Const(c) => *c,
            Tree::Add(a, b) => a.eval(x) + b.eval(x),
            Tree::Sub(a, b) => a.eval(x) - b.eval(x),
            Tree::Mul(a, b) => a.eval(x) * b.eval(x),
            Tree::Pow(a, k) => a.eval(x).pow(*k),
        }
    }

    fn build(&self) -> Polynomial {
        match self {
            Tree::Var(v) => Polynomial::var(*v),
            Tree::Const(c) => Polynomial::constant(*c as f64),
            Tree::Add(a, b) => a.build() + b.build(),
            Tree::Sub(a, b) => a.build() - b.build(),
            Tree::Mul(a, b) => a.build() * b.build(),
            Tree::Pow(a, k) => a.build().pow(*k),
        }
    }
}

const N: usize = 10;

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![
        (0..N).prop_map(Tree::Var),
        (-3i64..=3).prop_map(Tree::Const)
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..=3).prop_map(|(a, k)| Tree::Pow(Box::new(a), k)),
        ]
    })
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..N, 0..4), -4i32..=4), 0..8)
        .prop_map(|ts| Polynomial::from_terms(ts.into_iter().map(|(v, c)| (v, f64::from(c)))))
}

fn all_bits(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << n).map(move |k| (0..n).map(|i| ((k >> i) & 1) as u8).collect())
}

proptest! {
    #[test]
    fn reduction_matches_unreduced_tree(t in tree()) {
        let p = t.build();
        for x in all_bits(N) {
            prop_assert_eq!(p.evaluate(&x).unwrap(), t.eval(&x) as f64);
        }
    }

    #[test]
    fn terms_are_canonical(t in tree()) {
        let p = t.build();
        for (m, c) in p.terms() {
            prop_assert!(c != 0.0);
            prop_assert!(Monomial::from_sorted(m.vars().to_vec()).is_some());
        }
        prop_assert!(p.degree() <= p.variables().len());
    }

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * 1.0, a.clone());
    }

    #[test]
    fn variables_are_idempotent(v in 0..N, k in 1u32..6) {
        prop_assert_eq!(Polynomial::var(v).pow(k), Polynomial::var(v));
    }

    #[test]
    fn pow_is_repeated_product(a in poly(), k in 0u32..4) {
        let by_hand = (0..k).fold(Polynomial::constant(1.0), |acc, _| acc * &a);
        prop_assert_eq!(a.pow(k), by_hand);
    }
}
