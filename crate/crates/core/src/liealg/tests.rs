use proptest::prelude::*;

use super::*;
use crate::expr::Symbol;
use crate::{q, qf};

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// Only nonzero bracket: [v3, v4] = v3.
fn published() -> LieAlgebra {
    LieAlgebra::from_brackets(labels(4), &[(2, 3, vec![q(0), q(0), q(1), q(0)])]).unwrap()
}

fn vecq(v: &[i64]) -> AlgebraVector {
    AlgebraVector::from_rationals(&v.iter().map(|&c| q(c)).collect::<Vec<_>>())
}

fn sym(n: &str) -> Expr {
    Expr::symbol(&Symbol::parameter(n))
}

fn eps() -> Symbol {
    Symbol::group_parameter("eps")
}

#[test]
fn fields_give_published_table() {
    let t = Symbol::dependent("T");
    let fields = vec![
        VectorField::translation(&Symbol::independent("x")),
        VectorField::translation(&Symbol::independent("y")),
        VectorField::translation(&t),
        VectorField::zero().with(&t, Expr::symbol(&t)),
    ];
    let g = from_fields(&fields).unwrap();
    assert_eq!(g, published());
    let table = g.commutator_table();
    assert_eq!(table[2][3], vecq(&[0, 0, 1, 0]));
    assert_eq!(table[3][2], vecq(&[0, 0, -1, 0]));
    assert!(g.render_table().contains("-v3"));
}

#[test]
fn non_closed_basis_is_rejected() {
    let x = Symbol::independent("x");
    let fields = vec![VectorField::translation(&x), VectorField::zero().with(&x, Expr::symbol(&x).pow(2))];
    assert!(matches!(from_fields(&fields), Err(Error::Closure(_))));
}

#[test]
fn single_field_is_abelian() {
    let g = from_fields(&[VectorField::translation(&Symbol::independent("x"))]).unwrap();
    assert_eq!(g, LieAlgebra::abelian(1));
}

#[test]
fn jacobi_is_validated() {
    // [v1,v2]=v3, [v1,v3]=v1, [v2,v3]=0 violates Jacobi.
    let bad = LieAlgebra::from_brackets(
        labels(3),
        &[(0, 1, vec![q(0), q(0), q(1)]), (0, 2, vec![q(1), q(0), q(0)])],
    );
    assert!(bad.is_err());
}

#[test]
fn published_adjoint_entries() {
    let g = published();
    let m3 = adjoint_matrix(&g, 2, &eps()).unwrap();
    let e = Expr::symbol(&eps());
    assert_eq!(m3.entries[3][2], -e.clone());
    assert_eq!(m3.apply(&AlgebraVector::basis(4, 3)).coords, vec![Expr::zero(), Expr::zero(), -e, Expr::one()]);
    let m4 = adjoint_matrix(&g, 3, &eps()).unwrap();
    assert_eq!(m4.entries[2][2], Expr::exp(q(1), &eps()));
    assert_eq!(m4.entries[2][2].to_string(), "exp(eps)");
    assert!(adjoint_matrix(&g, 0, &eps()).unwrap().is_identity());
    assert!(adjoint_matrix(&g, 1, &eps()).unwrap().is_identity());
}

#[test]
fn adjoint_group_law_and_derivative() {
    let g = published();
    let e1 = Expr::symbol(&Symbol::group_parameter("e1"));
    let e2 = Expr::symbol(&Symbol::group_parameter("e2"));
    for i in 0..4 {
        let m = adjoint_matrix(&g, i, &eps()).unwrap();
        let lhs = m.at(&e1).unwrap().mul(&m.at(&e2).unwrap());
        let rhs = m.at(&(&e1 + &e2)).unwrap();
        assert_eq!(lhs.entries, rhs.entries);
        assert!(m.at(&Expr::zero()).unwrap().is_identity());
        let d = m.derivative().at(&Expr::zero()).unwrap();
        for j in 0..4 {
            assert_eq!(d.entries[j], g.bracket_basis(i, j).scale(&Expr::int(-1)).coords);
        }
    }
}

#[test]
fn irrational_eigenvalues_are_unsupported() {
    // ad(v3) acts on span{v1, v2} by [[0, 2], [1, 0]], eigenvalues ±sqrt 2.
    let g = LieAlgebra::from_brackets(
        labels(3),
        &[(2, 0, vec![q(0), q(1), q(0)]), (2, 1, vec![q(2), q(0), q(0)])],
    )
    .unwrap();
    assert!(matches!(adjoint_matrix(&g, 2, &eps()), Err(Error::NotSupported(_))));
}

#[test]
fn series_and_radical() {
    let g = published();
    let ds = derived_series(&g);
    assert_eq!(ds.len(), 3);
    assert_eq!(ds[1].display_with(g.labels()), "⟨v3⟩");
    assert!(ds[2].is_zero());
    assert!(is_solvable(&g));
    assert!(!is_nilpotent(&g));
    let k = killing_form(&g);
    assert_eq!(k[3][3], q(1));
    assert_eq!(crate::linalg::rank(&k), 1);
    assert_eq!(radical(&g).dim(), 4);
    assert_eq!(decomposition(&g).name, "ℝ² ⊕ a(1)");
}

#[test]
fn abelian_and_affine_structure() {
    let a = LieAlgebra::abelian(3);
    assert!(derived_series(&a)[1].is_zero());
    assert!(killing_form(&a).iter().flatten().all(Zero::is_zero));
    assert_eq!(radical(&a).dim(), 3);
    let aff = LieAlgebra::from_brackets(labels(2), &[(0, 1, vec![q(1), q(0)])]).unwrap();
    assert!(is_solvable(&aff));
    assert!(!is_nilpotent(&aff));
    assert_eq!(lower_central_series(&aff).last().unwrap().dim(), 1);
    assert_eq!(decomposition(&aff).name, "a(1)");
}

#[test]
fn published_subalgebras_close() {
    let g = published();
    let (b1, b2, b3, b4) = (sym("b1"), sym("b2"), sym("b3"), sym("b4"));
    let z = Expr::zero;
    let one = Expr::one;
    let class1 = [
        AlgebraVector::new(vec![b1.clone(), b2.clone(), z(), z()]),
        AlgebraVector::new(vec![b3.clone(), b4.clone(), one(), z()]),
    ];
    let c = is_subalgebra(&g, &class1);
    assert_eq!(c.verdict, Verdict::Closed);
    assert!(c.generically_independent());
    let class2 = [AlgebraVector::new(vec![b1, b2, z(), z()]), vecq(&[0, 0, 0, 1])];
    assert_eq!(is_subalgebra(&g, &class2).verdict, Verdict::Closed);
    assert_eq!(is_subalgebra(&g, &[vecq(&[0, 0, 1, 0]), vecq(&[0, 0, 0, 1])]).verdict, Verdict::Closed);
    for t in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        let vs: Vec<AlgebraVector> = t.iter().map(|&i| AlgebraVector::basis(4, i - 1)).collect();
        assert_eq!(is_subalgebra(&g, &vs).verdict, Verdict::Closed, "{t:?}");
    }
    // {v3, v1 + v4} is closed: [v3, v1 + v4] = v3.
    assert_eq!(is_subalgebra(&g, &[vecq(&[0, 0, 1, 0]), vecq(&[1, 0, 0, 1])]).verdict, Verdict::Closed);
    // {v1 + v3, v4} is not: [v1 + v3, v4] = v3.
    assert_eq!(is_subalgebra(&g, &[vecq(&[1, 0, 1, 0]), vecq(&[0, 0, 0, 1])]).verdict, Verdict::NotClosed);
}

#[test]
fn symbolic_closure_conditions() {
    let g = published();
    let a = sym("a");
    let v = [AlgebraVector::new(vec![Expr::one(), Expr::zero(), a.clone(), Expr::zero()]), vecq(&[0, 0, 0, 1])];
    match is_subalgebra(&g, &v).verdict {
        Verdict::ClosedUnder(c) => assert_eq!(c, vec![a]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn normalize_examples() {
    let g = published();
    let x = [q(2), q(3), q(5), q(0)];
    let n = normalize_1d(&g, &x).unwrap();
    assert!(n.moves.is_empty());
    assert_eq!(n.result, vec![qf(2, 5), qf(3, 5), q(1), q(0)]);
    let x = [q(1), q(1), q(3), q(2)];
    let n = normalize_1d(&g, &x).unwrap();
    assert_eq!(n.moves, vec![AdjointMove { generator: 2, epsilon: qf(3, 2) }]);
    assert_eq!(n.result, vec![qf(1, 2), qf(1, 2), q(0), q(1)]);
    assert_eq!(n.replay(&g).unwrap(), n.result);
    let n = normalize_1d(&g, &[q(0), q(0), q(-4), q(0)]).unwrap();
    assert_eq!(n.result, vec![q(0), q(0), q(1), q(0)]);
    assert!(normalize_1d(&g, &vec![q(0), q(0), q(0), q(0)]).is_err());
}

#[test]
fn one_dimensional_classes() {
    let g = published();
    let classes = classify_1d(&g, &[q(-1), q(0), q(1)]).unwrap();
    let shown: Vec<String> = classes.iter().map(|c| c.display_with(g.labels())).collect();
    assert_eq!(shown, vec!["v1", "α1*v1 + v2", "α1*v1 + α2*v2 + v3", "α1*v1 + α2*v2 + v4"]);
}

#[test]
fn pair_condition_for_central_generator() {
    let g = published();
    let x1 = AlgebraVector::new(vec![sym("b1"), sym("b2"), Expr::zero(), Expr::zero()]);
    let sol = solve_pair_condition(&g, &x1).unwrap();
    assert!(sol.constraints.is_empty());
    let shown: Vec<String> = sol.cases.iter().map(|c| c.candidate.to_string()).collect();
    assert_eq!(shown, vec!["a1*v1 + a2*v2 + v4", "a1*v1 + a2*v2 + v3", "a1*v1 + v2", "v1"]);
    assert!(sol.cases.iter().all(ExtensionCase::closes));
    assert_eq!(sol.cases[0].moves.len(), 1);
}

#[test]
fn pair_condition_for_v3_class() {
    let g = published();
    let x1 = AlgebraVector::new(vec![sym("b1"), sym("b2"), Expr::one(), Expr::zero()]);
    let sol = solve_pair_condition(&g, &x1).unwrap();
    let top = &sol.cases[0];
    assert_eq!(top.top, 3);
    assert_eq!(top.forced.len(), 2);
    assert_eq!(top.fixed[0], vecq(&[0, 0, 1, 0]));
    assert_eq!(top.candidate.to_string(), "a1*v1 + a2*v2 + v4");
    assert!(top.closes());
    let v3 = solve_pair_condition(&g, &vecq(&[0, 0, 1, 0])).unwrap();
    assert!(v3.admits(&g, &vecq(&[0, 0, 0, 1])));
    let v1 = solve_pair_condition(&g, &vecq(&[1, 0, 0, 0])).unwrap();
    assert!(v1.admits(&g, &vecq(&[0, 1, 0, 0])));
}

#[test]
fn triple_conditions() {
    let g = published();
    let t = solve_triple_condition(&g, &vecq(&[1, 0, 0, 0]), &vecq(&[0, 1, 0, 0])).unwrap();
    assert!(t.admits(&g, &vecq(&[0, 0, 1, 0])));
    assert!(!t.admits(&g, &vecq(&[1, 0, 0, 0])));
    let shown: Vec<String> = t.cases.iter().map(|c| c.candidate.to_string()).collect();
    assert_eq!(shown, vec!["v4", "v3"]);
    let t = solve_triple_condition(&g, &vecq(&[0, 0, 1, 0]), &vecq(&[0, 0, 0, 1])).unwrap();
    assert!(t.admits(&g, &vecq(&[1, 0, 0, 0])));
    assert!(solve_triple_condition(&g, &vecq(&[1, 0, 1, 0]), &vecq(&[0, 0, 0, 1])).is_err());
}

fn arb_vec() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|v| v.into_iter().map(q).collect())
}

fn arb_algebra() -> impl Strategy<Value = LieAlgebra> {
    // Random solvable algebras: ad(v4) acts by an upper-triangular matrix on an
    // abelian ideal span{v1, v2, v3}.
    prop::collection::vec(-2i64..=2, 6).prop_map(|a| {
        let col = |j: usize| -> Vec<Rational> {
            let m = [[a[0], a[1], a[2]], [0, a[3], a[4]], [0, 0, a[5]]];
            vec![q(m[0][j]), q(m[1][j]), q(m[2][j]), q(0)]
        };
        LieAlgebra::from_brackets(labels(4), &[(3, 0, col(0)), (3, 1, col(1)), (3, 2, col(2))]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn killing_symmetric_and_invariant(g in arb_algebra(), x in arb_vec(), y in arb_vec(), z in arb_vec()) {
        let k = killing_form(&g);
        let kf = |a: &[Rational], b: &[Rational]| -> Rational {
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| &a[i] * &k[i][j] * &b[j]).sum()
        };
        prop_assert_eq!(kf(&x, &y), kf(&y, &x));
        let xy = g.bracket_rational(&x, &y);
        let xz = g.bracket_rational(&x, &z);
        prop_assert!((kf(&xy, &z) + kf(&y, &xz)).is_zero());
    }

    #[test]
    fn perturbed_constants_fail_jacobi(d in 1i64..=3) {
        // [v1, v2] = v3, [v4, v1] = v1 has Jacobi failures once [v4, v3] is
        // perturbed away from the forced value.
        let bad = LieAlgebra::from_brackets(
            labels(4),
            &[(0, 1, vec![q(0), q(0), q(1), q(0)]), (3, 0, vec![q(1), q(0), q(0), q(0)]), (3, 2, vec![q(0), q(0), q(1 + d), q(0)])],
        );
        prop_assert!(bad.is_err());
    }

    #[test]
    fn normalize_is_idempotent_and_replays(x in arb_vec()) {
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let g = published();
        let n = normalize_1d(&g, &x).unwrap();
        prop_assert_eq!(n.replay(&g).unwrap(), n.result.clone());
        let again = normalize_1d(&g, &n.result).unwrap();
        prop_assert!(again.moves.is_empty());
        prop_assert_eq!(again.result, n.result.clone());
        if !x[3].is_zero() {
            prop_assert!(n.result[2].is_zero());
        }
    }

    #[test]
    fn adjoint_preserves_brackets(i in 0usize..4, x in arb_vec(), y in arb_vec()) {
        let g = published();
        let m = adjoint_matrix(&g, i, &eps()).unwrap();
        let ax = m.apply(&AlgebraVector::from_rationals(&x));
        let ay = m.apply(&AlgebraVector::from_rationals(&y));
        let lhs = g.bracket(&ax, &ay);
        let rhs = m.apply(&AlgebraVector::from_rationals(&g.bracket_rational(&x, &y)));
        prop_assert_eq!(&lhs, &rhs);
    }
}
