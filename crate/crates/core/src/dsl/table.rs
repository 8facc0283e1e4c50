//! Structure-constant tables:
//!
//! ```text
//! generators v1 v2 v3 v4;
//! [v3, v4] = v3;
//! ```
//!
//! Brackets not listed are zero; `[b, a]` follows by antisymmetry.

use num_traits::Zero;

use super::lexer::TokKind;
use super::parser::{Decl, Mode, Parser};
use super::{Ast, BinOp};
use crate::liealg::LieAlgebra;
use crate::{ParseError, Rational, Result};

fn coords(a: &Ast, labels: &[String]) -> Vec<Rational> {
    let n = labels.len();
    match a {
        Ast::Var(s) => {
            let mut v = vec![Rational::zero(); n];
            v[labels.iter().position(|l| l == s).expect("declared")] = Rational::from_integer(1.into());
            v
        }
        Ast::Neg(x) => coords(x, labels).into_iter().map(|c| -c).collect(),
        Ast::Bin(op, l, r) => {
            let vl = vector(l);
            let vr = vector(r);
            match (op, vl, vr) {
                (BinOp::Add, ..) => coords(l, labels).iter().zip(coords(r, labels)).map(|(a, b)| a + b).collect(),
                (BinOp::Sub, ..) => coords(l, labels).iter().zip(coords(r, labels)).map(|(a, b)| a - b).collect(),
                (BinOp::Mul, true, _) => coords(l, labels).into_iter().map(|c| c * number(r)).collect(),
                (BinOp::Mul, false, _) => coords(r, labels).into_iter().map(|c| c * number(l)).collect(),
                (BinOp::Div, ..) => coords(l, labels).into_iter().map(|c| c / number(r)).collect(),
            }
        }
        Ast::Num(_) | Ast::Pow(..) | Ast::Jet(_) | Ast::Basis(_) => vec![Rational::zero(); n],
    }
}

fn vector(a: &Ast) -> bool {
    match a {
        Ast::Var(_) => true,
        Ast::Neg(x) => vector(x),
        Ast::Bin(_, l, r) => vector(l) || vector(r),
        _ => false,
    }
}

fn number(a: &Ast) -> Rational {
    match a {
        Ast::Num(n) => Rational::from_integer(n.clone()),
        Ast::Neg(x) => -number(x),
        Ast::Pow(x, k) => num_traits::pow(number(x), *k as usize),
        Ast::Bin(BinOp::Add, l, r) => number(l) + number(r),
        Ast::Bin(BinOp::Sub, l, r) => number(l) - number(r),
        Ast::Bin(BinOp::Mul, l, r) => number(l) * number(r),
        Ast::Bin(BinOp::Div, l, r) => number(l) / number(r),
        Ast::Var(_) | Ast::Jet(_) | Ast::Basis(_) => Rational::zero(),
    }
}

fn generator(p: &mut Parser<'_>, labels: &[String]) -> std::result::Result<usize, ParseError> {
    let at = p.peek_start();
    let t = p.next_ident();
    match t {
        Some(name) => labels
            .iter()
            .position(|l| *l == name)
            .ok_or_else(|| p.err(at, format!("`{name}` is not a generator"), "declare it with `generators` first")),
        None => Err(p.err(at, "expected a generator name", "brackets are written [v1, v2]")),
    }
}

/// Parses a table; the algebra's constructor validates the Jacobi identity.
pub fn parse_table(text: &str) -> Result<LieAlgebra> {
    let mut p = Parser::new(text)?;
    let at = p.peek_start();
    if p.next_ident().as_deref() != Some("generators") {
        return Err(p.err(at, "expected `generators`", "a table starts with `generators v1 v2 ...;`").into());
    }
    let mut labels = Vec::new();
    while !p.at_list_end(';') {
        labels.push(p.new_name(Decl::Generator)?);
    }
    if labels.is_empty() {
        return Err(p.err(p.peek_start(), "expected at least one generator", "list names separated by spaces").into());
    }
    p.expect(';', "statements end with `;`")?;
    let n = labels.len();
    let mut entries: Vec<(usize, usize, Vec<Rational>)> = Vec::new();
    while !p.at_eof() {
        let open = p.peek_start();
        p.expect('[', "entries are written [v1, v2] = ...;")?;
        let i = generator(&mut p, &labels)?;
        p.expect(',', "entries are written [v1, v2] = ...;")?;
        let j = generator(&mut p, &labels)?;
        p.expect(']', "entries are written [v1, v2] = ...;")?;
        p.expect('=', "entries are written [v1, v2] = ...;")?;
        let value = if p.peek_kind() == TokKind::Int(0.into()) {
            p.bump_pub();
            vec![Rational::zero(); n]
        } else {
            coords(&p.expr(Mode::Table)?, &labels)
        };
        p.expect(';', "statements end with `;`")?;
        if i == j && value.iter().any(|c| !c.is_zero()) {
            return Err(p.err(open, format!("[{0}, {0}] must be 0", labels[i]), "brackets are antisymmetric").into());
        }
        if entries.iter().any(|(a, b, _)| (*a, *b) == (i, j) || (*a, *b) == (j, i)) {
            return Err(p.err(open, format!("bracket [{}, {}] is given twice", labels[i], labels[j]), "list each pair once").into());
        }
        if i != j {
            entries.push((i, j, value));
        }
    }
    LieAlgebra::from_brackets(labels, &entries)
}

/// Nonzero brackets `[v_i, v_j]` with `i < j`.
pub fn render_table(g: &LieAlgebra) -> String {
    let mut out = format!("generators {};\n", g.labels().join(" "));
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            let b = g.bracket_basis(i, j);
            if !b.is_zero() {
                out.push_str(&format!("[{}, {}] = {};\n", g.labels()[i], g.labels()[j], b.display_with(g.labels())));
            }
        }
    }
    out
}

