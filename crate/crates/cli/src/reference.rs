//! Published values for the stagnation-point system, in this crate's
//! rendering conventions. Reports compare against them and flag differences.

use liesym::expr::{Expr, Symbol};
use liesym::jet::{JetCoordinate, JetSpace, MultiIndex};
use liesym::liealg::AlgebraVector;
use liesym::vfield::VectorField;
use liesym::q;

pub const DETERMINING_EQUATIONS: usize = 112;

/// `[v_i, v_j]`, row `i`, column `j`.
pub const COMMUTATORS: [[&str; 4]; 4] = [
    ["0", "0", "0", "0"],
    ["0", "0", "0", "0"],
    ["0", "0", "0", "v3"],
    ["0", "0", "-v3", "0"],
];

/// `M_i` with row `j` the image of `v_j`.
pub fn adjoint(i: usize) -> [[&'static str; 4]; 4] {
    let mut m = [["0"; 4]; 4];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = "1";
    }
    match i {
        2 => m[3][2] = "-eps",
        3 => m[2][2] = "exp(eps)",
        _ => {}
    }
    m
}

pub const GROUPS: [&str; 4] = [
    "(x + eps, y, U, V, P, T)",
    "(x, y + eps, U, V, P, T)",
    "(x, y, U, V, P, T + eps)",
    "(x, y, U, V, P, T*exp(eps))",
];

pub const TRANSFORMED: [[&str; 4]; 4] = [
    ["U = f(x + eps, y)", "V = g(x + eps, y)", "P = h(x + eps, y)", "T = r(x + eps, y)"],
    ["U = f(x, y + eps)", "V = g(x, y + eps)", "P = h(x, y + eps)", "T = r(x, y + eps)"],
    ["U = f(x, y)", "V = g(x, y)", "P = h(x, y)", "T = r(x, y) + eps"],
    ["U = f(x, y)", "V = g(x, y)", "P = h(x, y)", "T = exp(-eps)*r(x, y)"],
];

pub const SOLUTION_NAMES: [&str; 4] = ["f", "g", "h", "r"];

pub const INVARIANTS: [[&str; 5]; 4] = [
    ["y", "U", "V", "P", "T"],
    ["x", "U", "V", "P", "T"],
    ["x", "y", "U", "V", "P"],
    ["x", "y", "U", "V", "P"],
];

/// As printed: `ξ1 = C1, ξ2 = C2, η1 = 0, η2 = 0, η3 = T, η4 = 0`.
pub const COEFFICIENTS: [(&str, &str); 6] = [
    ("xi1", "C1"),
    ("xi2", "C2"),
    ("eta1", "0"),
    ("eta2", "0"),
    ("eta3", "T"),
    ("eta4", "0"),
];

/// As printed: `g ⊃ ⟨v1, v2, v3, v4⟩ ⊃ ⟨v3⟩`.
pub const DERIVED_SERIES: [&str; 3] = ["⟨v1, v2, v3, v4⟩", "⟨v1, v2, v3, v4⟩", "⟨v3⟩"];

pub const DECOMPOSITION: &str = "ℝ² ⊕ a(1)";

pub const ONE_DIM: [&str; 2] = ["α1*v1 + α2*v2", "α1*v1 + α2*v2 + α3*v3"];

pub const CLASS1_CONDITION: &str = "b1*b3 - b2*b4 ≠ 0";
pub const CLASS2_CONDITION: &str = "b1^2 + b2^2 ≠ 0";

pub fn space() -> JetSpace {
    JetSpace::new(
        vec![Symbol::independent("x"), Symbol::independent("y")],
        ["U", "V", "P", "T"].iter().map(|n| Symbol::dependent(n)).collect(),
    )
    .expect("valid space")
}

/// Whether `space` has the coordinates the published values refer to.
pub fn applies_to(space: &JetSpace) -> bool {
    space == &self::space()
}

pub fn generators() -> Vec<VectorField> {
    let t = Symbol::dependent("T");
    vec![
        VectorField::translation(&Symbol::independent("x")),
        VectorField::translation(&Symbol::independent("y")),
        VectorField::translation(&t),
        VectorField::zero().with(&t, Expr::symbol(&t)),
    ]
}

fn b(n: usize) -> Expr {
    Expr::symbol(&Symbol::parameter(&format!("b{n}")))
}

fn vec4(c: [Expr; 4]) -> AlgebraVector {
    AlgebraVector::new(c.to_vec())
}

fn e(i: usize) -> AlgebraVector {
    AlgebraVector::basis(4, i)
}

/// The three two-dimensional classes, with symbolic `b_i`.
pub fn two_dim() -> Vec<Vec<AlgebraVector>> {
    let z = Expr::zero;
    vec![
        vec![vec4([b(1), b(2), z(), z()]), vec4([b(3), b(4), Expr::one(), z()])],
        vec![vec4([b(1), b(2), z(), z()]), e(3)],
        vec![e(2), e(3)],
    ]
}

/// The four three-dimensional subalgebras, as index triples.
pub const THREE_DIM: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// The optimal-system table, by dimension. The third three-dimensional
/// entry is printed as `v1, v3, v3`; it is read as `v1, v3, v4`.
pub fn table() -> Vec<(usize, Vec<Vec<AlgebraVector>>)> {
    let a = |n: usize| Expr::symbol(&Symbol::parameter(&format!("a{n}")));
    let z = Expr::zero;
    vec![
        (1, vec![vec![vec4([a(1), a(2), z(), z()])], vec![vec4([a(1), a(2), a(3), z()])]]),
        (2, two_dim()),
        (3, THREE_DIM.iter().map(|t| t.iter().map(|&i| e(i)).collect()).collect()),
        (4, vec![(0..4).map(e).collect()]),
    ]
}

fn f(name: &str, vars: &[&str]) -> Expr {
    let vs: Vec<Symbol> = vars
        .iter()
        .map(|v| if *v == "x" || *v == "y" { Symbol::independent(v) } else { Symbol::dependent(v) })
        .collect();
    Expr::atom(JetCoordinate::new(Symbol::function(name), MultiIndex::from_vars(vs.iter())))
}

fn sym(n: &str) -> Expr {
    match n {
        "U" | "V" | "P" | "T" => Expr::symbol(&Symbol::dependent(n)),
        _ => Expr::symbol(&Symbol::parameter(n)),
    }
}

/// The determining equations printed explicitly, as `(printed, expression)`.
/// The last is printed with a malformed denominator and is read as a mixed
/// second derivative in `V` and `U`.
pub fn printed_determining() -> Vec<(&'static str, Expr)> {
    let (u, v, nu, alpha) = (sym("U"), sym("V"), sym("nu"), sym("alpha"));
    vec![
        (
            "2 alpha xi2_Ty + 2 V xi2_T - alpha eta4_TT = 0",
            (&alpha * &f("xi2", &["T", "y"])).scale(&q(2)) + (&v * &f("xi2", &["T"])).scale(&q(2))
                - &alpha * &f("eta4", &["T", "T"]),
        ),
        (
            "alpha V xi1_U + alpha nu xi1_Vy - nu V xi1_V + 2 nu U xi2_V - alpha U xi1_U + nu U xi1_U = 0",
            &alpha * &v * f("xi1", &["U"]) + &alpha * &nu * f("xi1", &["V", "y"]) - &nu * &v * f("xi1", &["V"])
                + (&nu * &u * f("xi2", &["V"])).scale(&q(2))
                - &alpha * &u * f("xi1", &["U"])
                + &nu * &u * f("xi1", &["U"]),
        ),
        ("V xi1_U + U xi2_V = 0", &v * &f("xi1", &["U"]) + &u * &f("xi2", &["V"])),
        ("U xi1_V + V xi1_V = 0", &u * &f("xi1", &["V"]) + &v * &f("xi1", &["V"])),
        ("2 xi2_Uy - eta1_UU = 0", f("xi2", &["U", "y"]).scale(&q(2)) - f("eta1", &["U", "U"])),
        ("xi1_UU - 2 xi2_VU = 0", f("xi1", &["U", "U"]) - f("xi2", &["V", "U"]).scale(&q(2))),
    ]
}
