use proptest::prelude::*;

use super::*;
use crate::expr::{normalize, RawExpr};
use crate::{q, qf};

fn space() -> JetSpace {
    JetSpace::new(
        vec![Symbol::independent("x"), Symbol::independent("y")],
        vec![
            Symbol::dependent("U"),
            Symbol::dependent("V"),
            Symbol::dependent("P"),
            Symbol::dependent("T"),
        ],
    )
    .unwrap()
}

fn s(n: &str) -> Symbol {
    if n == "x" || n == "y" {
        Symbol::independent(n)
    } else {
        Symbol::dependent(n)
    }
}

fn e(n: &str) -> Expr {
    Expr::symbol(&s(n))
}

fn jet(u: &str, vars: &[&str]) -> Expr {
    let vs: Vec<Symbol> = vars.iter().map(|v| s(v)).collect();
    let refs: Vec<&Symbol> = vs.iter().collect();
    Expr::atom(JetCoordinate::of(&s(u), &refs))
}

fn eps() -> Symbol {
    Symbol::group_parameter("eps")
}

fn published_fields() -> Vec<VectorField> {
    vec![
        VectorField::translation(&s("x")),
        VectorField::translation(&s("y")),
        VectorField::translation(&s("T")),
        VectorField::zero().with(&s("T"), e("T")),
    ]
}

#[test]
fn display_forms() {
    let sp = space();
    let f = published_fields();
    assert_eq!(f[3].display_in(&sp), "T ∂_T");
    assert_eq!(f[0].add(&f[1]).display_in(&sp), "∂_x + ∂_y");
    assert_eq!(f[3].to_dsl(&sp), "T * d/dT");
    let g = VectorField::zero().with(&s("x"), Expr::int(-2)).with(&s("U"), e("U") + Expr::one());
    assert_eq!(g.display_in(&sp), "-2 ∂_x + (U + 1) ∂_U");
}

#[test]
fn characteristic_of_translation() {
    let sp = space();
    let q = characteristic(&sp, &VectorField::translation(&s("x")));
    assert_eq!(q[&s("U")], -jet("U", &["x"]));
}

#[test]
fn prolongation_of_scaling_is_diagonal() {
    let sp = space();
    let pr = prolong(&sp, &published_fields()[3], 2).unwrap();
    assert_eq!(pr.jet_coeffs[&JetCoordinate::of(&s("T"), &[&s("y"), &s("y")])], jet("T", &["y", "y"]));
    assert!(pr.jet_coeffs[&JetCoordinate::of(&s("U"), &[&s("x")])].is_zero());
}

#[test]
fn prolongation_of_translation_vanishes() {
    let sp = space();
    let pr = prolong(&sp, &VectorField::translation(&s("y")), 2).unwrap();
    assert!(pr.jet_coeffs.values().all(Expr::is_zero));
}

#[test]
fn apply_rejects_high_order_jets() {
    let sp = space();
    let pr = prolong(&sp, &published_fields()[3], 1).unwrap();
    assert!(pr.apply(&jet("T", &["y", "y"])).is_err());
}

#[test]
fn bracket_of_published_pair() {
    let f = published_fields();
    assert_eq!(lie_bracket(&f[2], &f[3]), f[2]);
    assert!(lie_bracket(&f[0], &f[3]).is_zero());
}

#[test]
fn flows_of_published_fields() {
    let sp = space();
    let f = published_fields();
    let g1 = flow(&sp, &f[0], &eps()).unwrap();
    assert_eq!(g1.image(&s("x")), e("x") + Expr::symbol(&eps()));
    let g4 = flow(&sp, &f[3], &eps()).unwrap();
    assert_eq!(g4.image(&s("T")), e("T") * Expr::exp(q(1), &eps()));
    assert_eq!(g4.to_string(), "(x, y, U, V, P, T*exp(eps))");
}

#[test]
fn affine_flow_with_shift() {
    let sp = space();
    let v = VectorField::zero().with(&s("U"), e("U").scale(&q(2)) + Expr::int(3));
    let g = flow(&sp, &v, &eps()).unwrap();
    let ex = Expr::exp(q(2), &eps());
    assert_eq!(g.image(&s("U")), e("U") * &ex + (ex - Expr::one()).scale(&qf(3, 2)));
}

#[test]
fn group_law_for_flows() {
    let sp = space();
    let e1 = Symbol::group_parameter("e1");
    let e2 = Symbol::group_parameter("e2");
    let v = VectorField::zero()
        .with(&s("x"), Expr::int(1))
        .with(&s("T"), e("T").scale(&q(-3)) + Expr::int(2));
    let g = flow(&sp, &v, &eps()).unwrap();
    let a = g.at(&Expr::symbol(&e1)).unwrap();
    let b = g.at(&Expr::symbol(&e2)).unwrap();
    let ab = a.compose(&b).unwrap();
    let sum = g.at(&(Expr::symbol(&e1) + Expr::symbol(&e2))).unwrap();
    assert_eq!(ab.images, sum.images);
    assert!(g.at(&Expr::zero()).unwrap().is_identity());
}

#[test]
fn coupled_flow_is_unsupported() {
    let sp = space();
    let v = VectorField::zero().with(&s("x"), e("y"));
    assert!(matches!(flow(&sp, &v, &eps()), Err(Error::NotSupported(_))));
}

#[test]
fn invariants_of_diagonal_translation() {
    let sp = space();
    let f = published_fields();
    let v = f[0].add(&f[1]);
    let inv = invariants(&sp, &v).unwrap();
    assert_eq!(inv.len(), 5);
    assert_eq!(inv[0].as_polynomial().unwrap(), &(e("x") - e("y")));
    for i in &inv {
        assert!(i.is_annihilated_by(&v));
    }
}

#[test]
fn invariants_with_scaling() {
    let sp = space();
    let f = published_fields();
    let v = f[0].add(&f[3]);
    let inv = invariants(&sp, &v).unwrap();
    assert_eq!(inv.len(), 5);
    assert_eq!(inv[4].to_string(), "T*exp(-x)");
    let w = VectorField::zero()
        .with(&s("U"), e("U").scale(&q(2)))
        .with(&s("T"), e("T").scale(&q(3)));
    let inv = invariants(&sp, &w).unwrap();
    assert_eq!(inv[4].to_string(), "T^2/U^3");
    for i in &inv {
        assert!(i.is_annihilated_by(&w));
    }
}

#[test]
fn transformed_solutions() {
    let sp = space();
    let form = SolutionForm::generic(&sp, &["f", "g", "h", "r"]).unwrap();
    let f = published_fields();
    let show = |k: usize| {
        let g = flow(&sp, &f[k], &eps()).unwrap();
        transform_solution(&sp, &g, &form)
            .unwrap()
            .components
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(show(0)[0], "U = f(x + eps, y)");
    assert_eq!(show(1)[3], "T = r(x, y + eps)");
    assert_eq!(show(2)[3], "T = r(x, y) - eps");
    assert_eq!(show(3)[3], "T = exp(-eps)*r(x, y)");
}

// Recursive oracle: phi^{J,x} = D_x phi^J - sum_i D_x(xi_i) u_{J,i}.
fn recursive_prolongation(sp: &JetSpace, v: &VectorField, n: u32) -> BTreeMap<JetCoordinate, Expr> {
    let mut out: BTreeMap<JetCoordinate, Expr> = BTreeMap::new();
    for u in sp.dependents() {
        out.insert(JetCoordinate::base(u), v.component(u));
    }
    for k in 1..=n {
        for u in sp.dependents() {
            for idx in MultiIndex::all_of_order(sp.independents(), k) {
                let x = idx.counts()[0].0.clone();
                let parent = idx.checked_sub(&MultiIndex::from_vars([&x])).unwrap();
                let pj = JetCoordinate::new(u.clone(), parent.clone());
                let mut c = sp.total_derivative(&out[&pj], &x).unwrap();
                for xi in sp.independents() {
                    let dxi = sp.total_derivative(&v.component(xi), &x).unwrap();
                    c -= &(dxi * Expr::atom(JetCoordinate::new(u.clone(), parent.increment(xi))));
                }
                out.insert(JetCoordinate::new(u.clone(), idx), c);
            }
        }
    }
    out.retain(|j, _| j.order() > 0);
    out
}

fn arb_coeff() -> impl Strategy<Value = Expr> {
    let names = ["x", "y", "U", "V", "P", "T"];
    prop::collection::vec((-3i64..=3, prop::sample::select(names.to_vec()), 0u32..=2, prop::sample::select(names.to_vec()), 0u32..=1), 0..4)
        .prop_map(|terms| {
            let raw = RawExpr::add(terms.into_iter().map(|(c, a, i, b, j)| {
                RawExpr::mul([
                    RawExpr::int(c),
                    RawExpr::pow(RawExpr::atom(s(a)), i),
                    RawExpr::pow(RawExpr::atom(s(b)), j),
                ])
            }));
            normalize(&raw).unwrap()
        })
}

fn arb_field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(arb_coeff(), 6).prop_map(|cs| {
        let mut v = VectorField::zero();
        for (n, c) in ["x", "y", "U", "V", "P", "T"].iter().zip(cs) {
            v.set(&s(n), c);
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn prolongation_matches_recursion(v in arb_field()) {
        let sp = space();
        let pr = prolong(&sp, &v, 2).unwrap();
        prop_assert_eq!(pr.jet_coeffs, recursive_prolongation(&sp, &v, 2));
    }

    #[test]
    fn prolongation_is_linear(v in arb_field(), w in arb_field(), k in -4i64..=4) {
        let sp = space();
        let pv = prolong(&sp, &v, 2).unwrap();
        let pw = prolong(&sp, &w, 2).unwrap();
        let sum = prolong(&sp, &v.scale_rational(&q(k)).add(&w), 2).unwrap();
        for (j, c) in &sum.jet_coeffs {
            prop_assert_eq!(c, &(pv.jet_coeffs[j].scale(&q(k)) + &pw.jet_coeffs[j]));
        }
    }

    #[test]
    fn bracket_antisymmetric(v in arb_field(), w in arb_field()) {
        prop_assert_eq!(lie_bracket(&v, &w), lie_bracket(&w, &v).scale_rational(&q(-1)));
    }

    #[test]
    fn bracket_jacobi(a in arb_field(), b in arb_field(), c in arb_field()) {
        let j = lie_bracket(&a, &lie_bracket(&b, &c))
            .add(&lie_bracket(&b, &lie_bracket(&c, &a)))
            .add(&lie_bracket(&c, &lie_bracket(&a, &b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn prolongation_respects_brackets(v in arb_field(), w in arb_field()) {
        // [pr2 v, pr2 w] = pr2 [v, w] on every jet of order 1 and 2.
        let sp = space();
        let pv = prolong(&sp, &v, 2).unwrap();
        let pw = prolong(&sp, &w, 2).unwrap();
        let pb = prolong(&sp, &lie_bracket(&v, &w), 2).unwrap();
        for j in sp.jet_coordinates(2) {
            let j = Expr::atom(j);
            let lhs = pv.apply(&pw.apply(&j).unwrap()).unwrap() - pw.apply(&pv.apply(&j).unwrap()).unwrap();
            prop_assert_eq!(lhs, pb.apply(&j).unwrap());
        }
    }
}
