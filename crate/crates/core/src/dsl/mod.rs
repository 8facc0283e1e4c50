//! The `.pde` input language.
//!
//! ```text
//! independent x y;
//! dependent U V;
//! param nu nonzero;
//! eq D(U, x) + D(V, y) = 0;
//! eq U * D(U, x) = nu * D(U, y, y) leading D(U, y, y);
//! vfield v1 = d/dx;
//! option ansatz_degree 2;
//! ```
//!
//! Names are declared before use and never twice. Division is allowed by
//! nonzero parameters and integers in equations (it is cleared when the
//! equation is lowered) and by integers in field definitions. `d/dX` appears
//! only on the right of `vfield`.

mod lexer;
mod lower;
mod parser;
mod render;
mod table;

use std::fmt;

use num_bigint::BigInt;

pub use lower::{lower, Problem};
pub use table::{parse_table, render_table};

use crate::ParseError;
use parser::{Decl, Parser};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `D(U, x, y)`: a derivative of a dependent variable, variables as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivRef {
    pub dependent: String,
    pub vars: Vec<String>,
}

impl DerivRef {
    /// Equal as jets, ignoring the order of differentiation.
    pub fn same_jet(&self, other: &DerivRef) -> bool {
        let mut a = self.vars.clone();
        let mut b = other.vars.clone();
        a.sort();
        b.sort();
        self.dependent == other.dependent && a == b
    }
}

impl fmt::Display for DerivRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {})", self.dependent, self.vars.join(", "))
    }
}

/// Expression trees as written, minus redundant parentheses. Literals are
/// nonnegative; a minus sign is [`Ast::Neg`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Num(BigInt),
    Var(String),
    Jet(DerivRef),
    /// `d/dX`
    Basis(String),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

impl Ast {
    pub(crate) fn collect_jets(&self, out: &mut Vec<DerivRef>) {
        match self {
            Ast::Jet(d) => out.push(d.clone()),
            Ast::Neg(a) | Ast::Pow(a, _) => a.collect_jets(out),
            Ast::Bin(_, a, b) => {
                a.collect_jets(out);
                b.collect_jets(out);
            }
            Ast::Num(_) | Ast::Var(_) | Ast::Basis(_) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Ast,
    pub rhs: Ast,
    pub leading: Option<DerivRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VfieldDef {
    pub name: String,
    pub body: Ast,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub ansatz_degree: Option<u32>,
    pub prolong_order: Option<u32>,
}

/// A parsed `.pde` file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceSpec {
    pub independents: Vec<String>,
    pub dependents: Vec<String>,
    pub parameters: Vec<Param>,
    pub equations: Vec<Equation>,
    pub vfields: Vec<VfieldDef>,
    pub options: Options,
}

pub fn parse(text: &str) -> Result<SourceSpec, ParseError> {
    Parser::new(text)?.source()
}

/// Renders a spec so that `parse(&render(s)) == Ok(s)`.
pub fn render(spec: &SourceSpec) -> String {
    render::source(spec)
}

pub fn render_expr(ast: &Ast) -> String {
    render::expr(ast)
}

/// Parses a field expression such as `d/dU` or `v1 + v2` against the
/// declarations and fields of `spec`.
pub fn parse_field(spec: &SourceSpec, text: &str) -> Result<Ast, ParseError> {
    let mut p = Parser::new(text)?;
    for n in &spec.independents {
        p.scope.insert(n.clone(), (Decl::Independent, None));
    }
    for n in &spec.dependents {
        p.scope.insert(n.clone(), (Decl::Dependent, None));
    }
    for prm in &spec.parameters {
        p.scope.insert(prm.name.clone(), (Decl::Param { nonzero: prm.nonzero }, None));
    }
    for v in &spec.vfields {
        p.scope.insert(v.name.clone(), (Decl::Field, None));
    }
    let ast = p.field_body()?;
    if !p.at_eof() {
        let t = p.peek_start();
        return Err(p.err(t, "unexpected input after the field", "give a single expression"));
    }
    Ok(ast)
}
