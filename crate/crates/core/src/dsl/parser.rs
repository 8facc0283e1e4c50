use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{self, lex, Tok, TokKind};
use super::{Ast, BinOp, DerivRef, Equation, Param, SourceSpec, VfieldDef};
use crate::ParseError;

pub(crate) const KEYWORDS: &[&str] = &[
    "independent",
    "dependent",
    "param",
    "nonzero",
    "eq",
    "leading",
    "vfield",
    "option",
    "generators",
    "D",
];

pub(crate) const MAX_EXPONENT: u32 = 64;
pub(crate) const MAX_OPTION: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Decl {
    Independent,
    Dependent,
    Param { nonzero: bool },
    Field,
    Generator,
}

impl Decl {
    fn describe(self) -> &'static str {
        match self {
            Decl::Independent => "an independent variable",
            Decl::Dependent => "a dependent variable",
            Decl::Param { .. } => "a parameter",
            Decl::Field => "a vector field",
            Decl::Generator => "a generator",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Equation,
    Field,
    /// Linear combinations of generators with rational coefficients.
    Table,
}

/// What a subexpression can be divided by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum DivClass {
    Literal,
    Param,
    Other,
}

struct Node {
    ast: Ast,
    start: usize,
    end: usize,
    vector: bool,
    div: DivClass,
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    toks: Vec<Tok>,
    pos: usize,
    pub(crate) scope: BTreeMap<String, (Decl, Option<usize>)>,
}

type Res<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Res<Self> {
        Ok(Parser {
            src,
            toks: lex(src)?,
            pos: 0,
            scope: BTreeMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn err(&self, at: usize, msg: impl Into<String>, hint: impl Into<String>) -> ParseError {
        lexer::error(self.src, at, msg, hint)
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().kind == TokKind::Punct(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().kind, TokKind::Ident(s) if s == w)
    }

    pub(crate) fn peek_kind(&self) -> TokKind {
        self.peek().kind.clone()
    }

    pub(crate) fn bump_pub(&mut self) {
        self.bump();
    }

    pub(crate) fn at_list_end(&self, c: char) -> bool {
        self.is_punct(c) || self.at_eof()
    }

    pub(crate) fn next_ident(&mut self) -> Option<String> {
        match self.peek().kind.clone() {
            TokKind::Ident(s) => {
                self.bump();
                Some(s)
            }
            _ => None,
        }
    }

    pub(crate) fn peek_start(&self) -> usize {
        self.peek().start
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek().kind == TokKind::Eof
    }

    fn describe(t: &Tok) -> String {
        match &t.kind {
            TokKind::Ident(s) => format!("`{s}`"),
            TokKind::Int(n) => format!("`{n}`"),
            TokKind::Basis(s) => format!("`d/d{s}`"),
            TokKind::Punct(c) => format!("`{c}`"),
            TokKind::Eof => "end of input".into(),
        }
    }

    pub(crate) fn expect(&mut self, c: char, hint: &str) -> Res<Tok> {
        if self.is_punct(c) {
            return Ok(self.bump());
        }
        let t = self.peek();
        let operand = matches!(t.kind, TokKind::Ident(_) | TokKind::Int(_) | TokKind::Basis(_) | TokKind::Punct('('));
        let hint = if operand && c != '(' { "an operator may be missing before it" } else { hint };
        Err(self.err(t.start, format!("expected `{c}`, found {}", Self::describe(t)), hint))
    }

    /// A fresh name for a declaration.
    pub(crate) fn new_name(&mut self, decl: Decl) -> Res<String> {
        let t = self.bump();
        let name = match t.kind {
            TokKind::Ident(s) => s,
            _ => {
                return Err(self.err(t.start, format!("expected a name, found {}", Self::describe(&t)), "names start with a letter or `_`"))
            }
        };
        if KEYWORDS.contains(&name.as_str()) {
            return Err(self.err(t.start, format!("`{name}` is a reserved word"), "choose another name"));
        }
        if let Some((d, at)) = self.scope.get(&name) {
            let hint = match at {
                Some(at) => format!("first declared as {} at line {}", d.describe(), lexer::location(self.src, *at).0),
                None => format!("already declared as {}", d.describe()),
            };
            return Err(self.err(t.start, format!("`{name}` is declared twice"), hint));
        }
        self.scope.insert(name.clone(), (decl, Some(t.start)));
        Ok(name)
    }

    fn names_until_semicolon(&mut self, decl: Decl) -> Res<Vec<String>> {
        let mut out = Vec::new();
        while !self.is_punct(';') && !self.is_word("nonzero") {
            out.push(self.new_name(decl)?);
        }
        if out.is_empty() {
            let t = self.peek();
            return Err(self.err(t.start, "expected at least one name", "list names separated by spaces"));
        }
        Ok(out)
    }

    pub(crate) fn source(mut self) -> Res<SourceSpec> {
        let mut spec = SourceSpec::default();
        let mut seen_options: BTreeMap<String, usize> = BTreeMap::new();
        while !self.at_eof() {
            let t = self.bump();
            let word = match &t.kind {
                TokKind::Ident(s) => s.clone(),
                _ => String::new(),
            };
            match word.as_str() {
                "independent" => {
                    let names = self.names_until_semicolon(Decl::Independent)?;
                    spec.independents.extend(names);
                }
                "dependent" => {
                    let names = self.names_until_semicolon(Decl::Dependent)?;
                    spec.dependents.extend(names);
                }
                "param" => {
                    // The flag is known only at the end of the statement.
                    let names = self.names_until_semicolon(Decl::Param { nonzero: false })?;
                    let nonzero = self.is_word("nonzero");
                    if nonzero {
                        self.bump();
                        for n in &names {
                            if let Some(e) = self.scope.get_mut(n) {
                                e.0 = Decl::Param { nonzero: true };
                            }
                        }
                    }
                    spec.parameters.extend(names.into_iter().map(|name| Param { name, nonzero }));
                }
                "eq" => {
                    let lhs = self.expr(Mode::Equation)?;
                    self.expect('=', "an equation has the form `eq <expr> = <expr>;`")?;
                    let rhs = self.expr(Mode::Equation)?;
                    let leading = if self.is_word("leading") {
                        self.bump();
                        let at = self.peek().start;
                        if !self.is_word("D") {
                            return Err(self.err(at, "expected `D(...)` after `leading`", "write for example `leading D(U, y, y)`"));
                        }
                        self.bump();
                        let d = self.deriv()?;
                        let mut jets = Vec::new();
                        lhs.collect_jets(&mut jets);
                        rhs.collect_jets(&mut jets);
                        if !jets.iter().any(|j| j.same_jet(&d)) {
                            return Err(self.err(at, format!("{d} does not occur in this equation"), "the leading derivative must be one of the equation's derivatives"));
                        }
                        Some(d)
                    } else {
                        None
                    };
                    spec.equations.push(Equation { lhs, rhs, leading });
                }
                "vfield" => {
                    let name_at = self.peek().start;
                    let name = self.new_name(Decl::Field)?;
                    // Not usable in its own body.
                    self.scope.remove(&name);
                    self.expect('=', "a field has the form `vfield v = <expr>;`")?;
                    let body = self.field_body()?;
                    self.scope.insert(name.clone(), (Decl::Field, Some(name_at)));
                    spec.vfields.push(VfieldDef { name, body });
                }
                "option" => {
                    let nt = self.bump();
                    let name = match &nt.kind {
                        TokKind::Ident(s) if s == "ansatz_degree" || s == "prolong_order" => s.clone(),
                        _ => {
                            return Err(self.err(nt.start, format!("unknown option {}", Self::describe(&nt)), "options are `ansatz_degree` and `prolong_order`"));
                        }
                    };
                    if let Some(at) = seen_options.get(&name) {
                        let line = lexer::location(self.src, *at).0;
                        return Err(self.err(nt.start, format!("option `{name}` is set twice"), format!("first set at line {line}")));
                    }
                    seen_options.insert(name.clone(), nt.start);
                    let vt = self.bump();
                    let value = match &vt.kind {
                        TokKind::Int(n) if *n <= BigInt::from(MAX_OPTION) => u32::try_from(n).expect("small"),
                        _ => {
                            return Err(self.err(vt.start, format!("expected an integer from 0 to {MAX_OPTION}, found {}", Self::describe(&vt)), "for example `option ansatz_degree 2;`"));
                        }
                    };
                    if name == "ansatz_degree" {
                        spec.options.ansatz_degree = Some(value);
                    } else {
                        spec.options.prolong_order = Some(value);
                    }
                }
                _ => {
                    return Err(self.err(
                        t.start,
                        format!("expected a statement, found {}", Self::describe(&t)),
                        "statements start with independent, dependent, param, eq, vfield or option",
                    ));
                }
            }
            self.expect(';', "statements end with `;`")?;
        }
        Ok(spec)
    }

    /// A vector-valued expression in [`Mode::Field`].
    pub(crate) fn field_body(&mut self) -> Res<Ast> {
        let n = self.expr_node(Mode::Field)?;
        if !self.is_punct(';') && !self.at_eof() {
            self.expect(';', "statements end with `;`")?;
        }
        if !n.vector {
            return Err(self.err(n.start, "a vector field needs d/dX terms", "for example `T * d/dT`"));
        }
        Ok(n.ast)
    }

    pub(crate) fn expr(&mut self, mode: Mode) -> Res<Ast> {
        let n = self.expr_node(mode)?;
        if mode == Mode::Table && n.vector {
            return Ok(n.ast);
        }
        if n.vector {
            return Err(self.err(n.start, "d/dX terms are only allowed in vfield definitions", "move this into a `vfield` statement"));
        }
        Ok(n.ast)
    }

    fn check_sum(&self, mode: Mode, l: &Node, r: &Node) -> Res<()> {
        if mode == Mode::Equation || l.vector == r.vector {
            return Ok(());
        }
        let scalar = if l.vector { r } else { l };
        let hint = if mode == Mode::Table {
            "every term must be a multiple of a generator"
        } else {
            "every term must be a multiple of some d/dX"
        };
        Err(self.err(scalar.start, "cannot add a scalar to a vector term", hint))
    }

    fn expr_node(&mut self, mode: Mode) -> Res<Node> {
        let mut l = self.term(mode)?;
        while self.is_punct('+') || self.is_punct('-') {
            let op = if self.bump().kind == TokKind::Punct('+') { BinOp::Add } else { BinOp::Sub };
            let r = self.term(mode)?;
            self.check_sum(mode, &l, &r)?;
            l = Node {
                start: l.start,
                end: r.end,
                vector: l.vector || r.vector,
                div: DivClass::Other,
                ast: Ast::Bin(op, Box::new(l.ast), Box::new(r.ast)),
            };
        }
        Ok(l)
    }

    fn term(&mut self, mode: Mode) -> Res<Node> {
        let mut l = self.unary(mode)?;
        while self.is_punct('*') || self.is_punct('/') {
            let div = self.bump().kind == TokKind::Punct('/');
            let r = self.unary(mode)?;
            if div {
                self.check_divisor(mode, &r)?;
            } else if l.vector && r.vector {
                return Err(self.err(r.start, "cannot multiply two vector terms", "coefficients multiply a single d/dX"));
            }
            l = Node {
                start: l.start,
                end: r.end,
                vector: l.vector || r.vector,
                div: l.div.max(r.div),
                ast: Ast::Bin(if div { BinOp::Div } else { BinOp::Mul }, Box::new(l.ast), Box::new(r.ast)),
            };
        }
        Ok(l)
    }

    fn check_divisor(&self, mode: Mode, r: &Node) -> Res<()> {
        if r.vector {
            return Err(self.err(r.start, "cannot divide by a vector term", "divide the coefficient instead"));
        }
        let allowed = match mode {
            Mode::Equation => DivClass::Param,
            Mode::Field | Mode::Table => DivClass::Literal,
        };
        if r.div <= allowed {
            return Ok(());
        }
        if let Ast::Num(n) = &r.ast {
            if n.is_zero() {
                return Err(self.err(r.start, "division by zero", "remove the division"));
            }
        }
        if let Ast::Var(name) = &r.ast {
            if let Some((Decl::Param { nonzero: false }, _)) = self.scope.get(name) {
                return Err(self.err(
                    r.start,
                    format!("division by `{name}`, which is not declared nonzero"),
                    format!("write `param {name} nonzero;`"),
                ));
            }
        }
        let hint = match mode {
            Mode::Equation => "divisors must be products of nonzero parameters and integers",
            Mode::Field | Mode::Table => "divisors must be nonzero integers here",
        };
        Err(self.err(r.start, "unsupported divisor", hint))
    }

    fn unary(&mut self, mode: Mode) -> Res<Node> {
        if self.is_punct('-') {
            let start = self.bump().start;
            let n = self.unary(mode)?;
            return Ok(Node {
                start,
                end: n.end,
                vector: n.vector,
                div: n.div,
                ast: Ast::Neg(Box::new(n.ast)),
            });
        }
        self.power(mode)
    }

    fn power(&mut self, mode: Mode) -> Res<Node> {
        let base = self.primary(mode)?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let caret = self.bump();
        if base.vector {
            return Err(self.err(caret.start, "cannot raise a vector term to a power", "only coefficients can be powers"));
        }
        let t = self.bump();
        let k = match &t.kind {
            TokKind::Int(n) if *n <= BigInt::from(MAX_EXPONENT) => u32::try_from(n).expect("small"),
            TokKind::Int(_) => {
                return Err(self.err(t.start, format!("exponent exceeds {MAX_EXPONENT}"), "use a smaller exponent"));
            }
            _ => {
                return Err(self.err(t.start, format!("expected an integer exponent, found {}", Self::describe(&t)), "exponents are nonnegative integers"));
            }
        };
        if self.is_punct('^') {
            let at = self.peek().start;
            return Err(self.err(at, "chained powers need parentheses", "write (a^2)^3"));
        }
        Ok(Node {
            start: base.start,
            end: t.end,
            vector: false,
            div: if k == 0 { DivClass::Literal } else { base.div },
            ast: Ast::Pow(Box::new(base.ast), k),
        })
    }

    fn primary(&mut self, mode: Mode) -> Res<Node> {
        let t = self.bump();
        let leaf = |ast: Ast, vector: bool, div: DivClass| Node {
            ast,
            start: t.start,
            end: t.end,
            vector,
            div,
        };
        match &t.kind {
            TokKind::Int(n) => {
                let div = if n.is_zero() { DivClass::Other } else { DivClass::Literal };
                Ok(leaf(Ast::Num(n.clone()), false, div))
            }
            TokKind::Punct('(') => {
                let inner = self.expr_node(mode)?;
                let close = self.expect(')', "unbalanced parenthesis")?;
                Ok(Node {
                    start: t.start,
                    end: close.end,
                    ..inner
                })
            }
            TokKind::Basis(name) => {
                if mode != Mode::Field {
                    return Err(self.err(t.start, "d/dX terms are only allowed in vfield definitions", "move this into a `vfield` statement"));
                }
                match self.scope.get(name) {
                    Some((Decl::Independent | Decl::Dependent, _)) => Ok(leaf(Ast::Basis(name.clone()), true, DivClass::Other)),
                    Some((d, _)) => Err(self.err(t.start + 3, format!("`{name}` is {}", d.describe()), "d/dX needs an independent or dependent variable")),
                    None => Err(self.err(t.start + 3, format!("undeclared identifier `{name}`"), "declare it with `independent` or `dependent` first")),
                }
            }
            TokKind::Ident(name) if name == "D" => {
                if mode != Mode::Equation {
                    return Err(self.err(t.start, "derivatives cannot appear here", "field coefficients depend on base coordinates and parameters only"));
                }
                let d = self.deriv()?;
                let end = self.toks[self.pos - 1].end;
                Ok(Node {
                    ast: Ast::Jet(d),
                    start: t.start,
                    end,
                    vector: false,
                    div: DivClass::Other,
                })
            }
            TokKind::Ident(name) if KEYWORDS.contains(&name.as_str()) => {
                Err(self.err(t.start, format!("unexpected keyword `{name}`"), "a `;` may be missing before it"))
            }
            TokKind::Ident(name) => match (mode, self.scope.get(name)) {
                (_, None) => {
                    let hint = if mode == Mode::Table {
                        "declare it with `generators` first"
                    } else {
                        "declare it with `independent`, `dependent` or `param` before use"
                    };
                    Err(self.err(t.start, format!("undeclared identifier `{name}`"), hint))
                }
                (Mode::Table, Some((Decl::Generator, _))) => Ok(leaf(Ast::Var(name.clone()), true, DivClass::Other)),
                (Mode::Table, Some(_)) => Err(self.err(t.start, format!("`{name}` is not a generator"), "only generators and numbers appear here")),
                (_, Some((Decl::Generator, _))) => Err(self.err(t.start, format!("`{name}` is a generator"), "generators appear only in tables")),
                (Mode::Equation, Some((Decl::Field, _))) => Err(self.err(t.start, format!("vector field `{name}` cannot appear in an equation"), "equations are scalar")),
                (Mode::Field, Some((Decl::Field, _))) => Ok(leaf(Ast::Var(name.clone()), true, DivClass::Other)),
                (_, Some((Decl::Param { nonzero: true }, _))) => Ok(leaf(Ast::Var(name.clone()), false, DivClass::Param)),
                (_, Some(_)) => Ok(leaf(Ast::Var(name.clone()), false, DivClass::Other)),
            },
            _ => Err(self.err(t.start, format!("expected an expression, found {}", Self::describe(&t)), "an operand is missing")),
        }
    }

    /// After `D`: `(dep, var, ...)`.
    fn deriv(&mut self) -> Res<DerivRef> {
        self.expect('(', "derivatives are written D(U, x, ...)")?;
        let dt = self.bump();
        let dependent = match &dt.kind {
            TokKind::Ident(n) => match self.scope.get(n) {
                Some((Decl::Dependent, _)) => n.clone(),
                Some((d, _)) => {
                    return Err(self.err(dt.start, format!("`{n}` is {}", d.describe()), "D(U, x) differentiates a dependent variable U"));
                }
                None => {
                    return Err(self.err(dt.start, format!("undeclared identifier `{n}`"), "declare it with `dependent` first"));
                }
            },
            _ => return Err(self.err(dt.start, format!("expected a dependent variable, found {}", Self::describe(&dt)), "derivatives are written D(U, x, ...)")),
        };
        let mut vars = Vec::new();
        while self.is_punct(',') {
            self.bump();
            let vt = self.bump();
            match &vt.kind {
                TokKind::Ident(n) => match self.scope.get(n) {
                    Some((Decl::Independent, _)) => vars.push(n.clone()),
                    Some((d, _)) => {
                        return Err(self.err(vt.start, format!("`{n}` is {}", d.describe()), "derivatives are taken with respect to independent variables"));
                    }
                    None => return Err(self.err(vt.start, format!("undeclared identifier `{n}`"), "declare it with `independent` first")),
                },
                _ => return Err(self.err(vt.start, format!("expected an independent variable, found {}", Self::describe(&vt)), "derivatives are written D(U, x, ...)")),
            }
        }
        if vars.is_empty() {
            let t = self.peek();
            return Err(self.err(t.start, "D needs at least one independent variable", format!("write {dependent} for the undifferentiated variable")));
        }
        self.expect(')', "derivatives are written D(U, x, ...)")?;
        Ok(DerivRef { dependent, vars })
    }
}
