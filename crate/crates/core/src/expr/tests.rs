use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::jet::{JetCoordinate, MultiIndex};
use crate::{q, qf};

fn u() -> Expr {
    Expr::atom(Symbol::dependent("U"))
}
fn v() -> Expr {
    Expr::atom(Symbol::dependent("V"))
}
fn x() -> Expr {
    Expr::atom(Symbol::independent("x"))
}
fn y() -> Expr {
    Expr::atom(Symbol::independent("y"))
}
fn eps() -> Symbol {
    Symbol::group_parameter("eps")
}
fn ty() -> Atom {
    Atom::Jet(JetCoordinate::new(
        Symbol::dependent("T"),
        MultiIndex::from_vars([&Symbol::independent("y")]),
    ))
}

#[test]
fn difference_of_squares() {
    let raw = RawExpr::mul([
        RawExpr::add([RawExpr::atom(Symbol::dependent("U")), RawExpr::atom(Symbol::dependent("V"))]),
        RawExpr::sub(RawExpr::atom(Symbol::dependent("U")), RawExpr::atom(Symbol::dependent("V"))),
    ]);
    let e = normalize(&raw).unwrap();
    assert_eq!(e, u().pow(2) - v().pow(2));
    assert_eq!(e.to_string(), "U^2 - V^2");
}

#[test]
fn commutativity_cancels() {
    let raw = RawExpr::sub(
        RawExpr::mul([RawExpr::atom(Symbol::dependent("U")), RawExpr::atom(Symbol::dependent("V"))]),
        RawExpr::mul([RawExpr::atom(Symbol::dependent("V")), RawExpr::atom(Symbol::dependent("U"))]),
    );
    assert!(normalize(&raw).unwrap().is_zero());
}

#[test]
fn exponentials_combine() {
    let e = Expr::exp(q(1), &eps()) * Expr::exp(q(-1), &eps());
    assert!(e.is_one());
    let e2 = Expr::exp(q(1), &eps()).pow(3) * Expr::exp(qf(1, 2), &eps());
    assert_eq!(e2, Expr::exp(qf(7, 2), &eps()));
    assert!(Expr::exp(q(0), &eps()).is_one());
}

#[test]
fn exponent_bound_is_enforced() {
    let raw = RawExpr::pow(RawExpr::atom(Symbol::independent("x")), 65);
    assert!(matches!(normalize(&raw), Err(Error::Capacity(_))));
    let ok = RawExpr::pow(RawExpr::atom(Symbol::independent("x")), 64);
    assert!(normalize(&ok).is_ok());
    let nested = RawExpr::pow(RawExpr::pow(RawExpr::atom(Symbol::independent("x")), 9), 8);
    assert!(matches!(normalize(&nested), Err(Error::Capacity(_))));
    assert!(normalize_with(&nested, 72).is_ok());
}

#[test]
fn partial_examples() {
    let ua: Atom = Symbol::dependent("U").into();
    assert_eq!((u().pow(2) * v()).partial(&ua), Expr::int(2) * u() * v());
    let e = x() * Expr::atom(ty());
    assert_eq!(e.partial(&ty()), x());
    let ea: Atom = eps().into();
    assert_eq!(Expr::exp(q(2), &eps()).partial(&ea), Expr::exp(q(2), &eps()).scale(&q(2)));
    // product rule across a polynomial factor: d/de (e * exp(3e)) = exp(3e) + 3 e exp(3e)
    let mixed = Expr::symbol(&eps()) * Expr::exp(q(3), &eps());
    let expect = Expr::exp(q(3), &eps()) + Expr::symbol(&eps()) * Expr::exp(q(3), &eps()).scale(&q(3));
    assert_eq!(mixed.partial(&ea), expect);
}

#[test]
fn substitution_examples() {
    let ux = Atom::Jet(JetCoordinate::of(&Symbol::dependent("U"), &[&Symbol::independent("x")]));
    let vy = Expr::atom(JetCoordinate::of(&Symbol::dependent("V"), &[&Symbol::independent("y")]));
    let e = Expr::atom(ux.clone()) + &vy;
    assert!(e.subs(ux, &(-&vy)).unwrap().is_zero());

    let ua: Atom = Symbol::dependent("U").into();
    assert_eq!(u().pow(2).subs(ua, &u()).unwrap(), u().pow(2));

    let xa: Atom = Symbol::independent("x").into();
    let shifted = (x() * y()).subs(xa, &(x() + Expr::symbol(&eps()))).unwrap();
    assert_eq!(shifted, x() * y() + Expr::symbol(&eps()) * y());
}

#[test]
fn cyclic_bindings_rejected() {
    let xa: Atom = Symbol::independent("x").into();
    let ya: Atom = Symbol::independent("y").into();
    let mut b = BTreeMap::new();
    b.insert(xa, y() + Expr::one());
    b.insert(ya, x());
    assert!(matches!((x() * y()).substitute(&b), Err(Error::Validation(_))));
}

#[test]
fn group_parameter_substitution_splits_exponentials() {
    let e1 = Symbol::group_parameter("e1");
    let e2 = Symbol::group_parameter("e2");
    let f = Expr::exp(q(2), &eps()) * x();
    let g = f
        .subs(eps(), &(Expr::symbol(&e1) + Expr::symbol(&e2)))
        .unwrap();
    assert_eq!(g, Expr::exp(q(2), &e1) * Expr::exp(q(2), &e2) * x());
    assert_eq!(f.subs(eps(), &Expr::zero()).unwrap(), x());
    assert!(matches!(f.subs(eps(), &Expr::one()), Err(Error::NotSupported(_))));
}

#[test]
fn collect_examples() {
    let a = Expr::atom(Symbol::unknown("a"));
    let b = Expr::atom(Symbol::unknown("b"));
    let c = Expr::atom(Symbol::unknown("c"));
    let ux_atom = Atom::Jet(JetCoordinate::of(&Symbol::dependent("U"), &[&Symbol::independent("x")]));
    let ux = Expr::atom(ux_atom.clone());
    let e = &a * &ux.pow(2) + &b * &ux + c.clone();
    let focus: BTreeSet<Atom> = [ux_atom.clone()].into_iter().collect();
    let parts = e.collect(&focus);
    assert_eq!(parts.len(), 3);
    assert_eq!(parts[&Monomial::atom(ux_atom.clone()).pow(2)], a);
    assert_eq!(parts[&Monomial::atom(ux_atom)], b);
    assert_eq!(parts[&Monomial::one()], c);
    assert!(Expr::zero().collect(&focus).is_empty());
}

#[test]
fn rendering_and_json() {
    let e = x().scale(&qf(3, 2)) - u() * v() + Expr::int(4);
    assert_eq!(e.to_string(), "3/2*x - U*V + 4");
    let j = e.to_json();
    assert_eq!(j.terms.len(), 3);
    assert_eq!(j.terms[0].coeff, "3/2");
    assert_eq!(j.terms[2].atoms.len(), 0);
    assert_eq!(Expr::exp(q(-1), &eps()).to_string(), "exp(-eps)");
    assert_eq!(Expr::exp(qf(1, 2), &eps()).to_string(), "exp(1/2*eps)");
    assert_eq!(Expr::zero().to_string(), "0");
}

#[test]
fn content_and_primitive() {
    let e = x().scale(&qf(-4, 3)) + y().scale(&qf(2, 9));
    let p = e.primitive();
    assert_eq!(p, x().scale(&q(6)) - y());
}

// --- randomized kernel laws ---------------------------------------------

fn atom_pool() -> Vec<Atom> {
    vec![
        Symbol::independent("x").into(),
        Symbol::independent("y").into(),
        Symbol::dependent("U").into(),
        Symbol::dependent("T").into(),
        Symbol::parameter("nu").into(),
        ty(),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let term = (
        -5i64..=5,
        1i64..=3,
        proptest::collection::vec((0usize..6, 1u32..=2), 0..3),
    );
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let pool = atom_pool();
        Expr::from_terms(terms.into_iter().map(|(n, d, fs)| {
            (
                Monomial::from_factors(fs.into_iter().map(|(i, e)| (pool[i].clone(), e))),
                qf(n, d),
            )
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz(f in arb_expr(), g in arb_expr(), i in 0usize..6) {
        let a = &atom_pool()[i];
        let lhs = (&f * &g).partial(a);
        let rhs = f.partial(a) * &g + &f * g.partial(a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_commute(e in arb_expr(), i in 0usize..6, j in 0usize..6) {
        let pool = atom_pool();
        prop_assert_eq!(e.partial(&pool[i]).partial(&pool[j]), e.partial(&pool[j]).partial(&pool[i]));
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        a in arb_expr(),
        b in arb_expr(),
        vals in proptest::collection::vec((-7i64..=7, 1i64..=4), 6),
    ) {
        let pool = atom_pool();
        let at = |atom: &Atom| pool.iter().position(|p| p == atom).map(|k| qf(vals[k].0, vals[k].1));
        let ea = a.eval(at).unwrap();
        let eb = b.eval(at).unwrap();
        prop_assert_eq!((&a + &b).eval(at).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(at).unwrap(), &ea * &eb);
    }
}
