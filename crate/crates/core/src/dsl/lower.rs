use std::collections::BTreeMap;

use num_traits::Zero;

use super::{parse_field, Ast, BinOp, DerivRef, SourceSpec};
use crate::detsys::{solved_forms, solved_forms_to_order, PdeSystem, RawSystem};
use crate::expr::{Atom, Expr, Monomial, Symbol, DEFAULT_MAX_EXPONENT};
use crate::jet::{JetCoordinate, JetSpace, MultiIndex};
use crate::vfield::VectorField;
use crate::{Error, Rational, Result};

pub const DEFAULT_ANSATZ_DEGREE: u32 = 2;

/// A lowered `.pde` file: polynomial equations, optional leading
/// derivatives, named fields and resolved options.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: SourceSpec,
    pub raw: RawSystem,
    pub leading: Vec<Option<JetCoordinate>>,
    pub vfields: Vec<(String, VectorField)>,
    pub ansatz_degree: u32,
    pub prolong_order: Option<u32>,
}

struct Ctx<'a> {
    spec: &'a SourceSpec,
    fields: &'a [(String, VectorField)],
}

impl Ctx<'_> {
    fn symbol(&self, name: &str) -> Symbol {
        if self.spec.independents.iter().any(|n| n == name) {
            Symbol::independent(name)
        } else if self.spec.dependents.iter().any(|n| n == name) {
            Symbol::dependent(name)
        } else {
            Symbol::parameter(name)
        }
    }

    fn jet(&self, d: &DerivRef) -> JetCoordinate {
        let vars: Vec<Symbol> = d.vars.iter().map(|v| Symbol::independent(v)).collect();
        JetCoordinate::new(Symbol::dependent(&d.dependent), MultiIndex::from_vars(&vars))
    }

    /// `num / den`, with `den` a monomial in parameters.
    fn fraction(&self, a: &Ast) -> Result<(Expr, Monomial)> {
        Ok(match a {
            Ast::Num(n) => (Expr::constant(Rational::from_integer(n.clone())), Monomial::one()),
            Ast::Var(s) => (Expr::symbol(&self.symbol(s)), Monomial::one()),
            Ast::Jet(d) => (Expr::atom(self.jet(d)), Monomial::one()),
            Ast::Basis(_) => return Err(Error::validation("d/dX in a scalar expression")),
            Ast::Neg(x) => {
                let (n, d) = self.fraction(x)?;
                (-n, d)
            }
            Ast::Pow(x, k) => {
                let (n, d) = self.fraction(x)?;
                (n.pow(*k), d.pow(*k))
            }
            Ast::Bin(op, l, r) => {
                let (ln, ld) = self.fraction(l)?;
                let (rn, rd) = self.fraction(r)?;
                match op {
                    BinOp::Add | BinOp::Sub => {
                        let m = lcm(&ld, &rd);
                        let a = ln.mul_monomial(&quotient(&m, &ld), &Rational::from_integer(1.into()));
                        let b = rn.mul_monomial(&quotient(&m, &rd), &Rational::from_integer(1.into()));
                        (if *op == BinOp::Add { a + b } else { a - b }, m)
                    }
                    BinOp::Mul => (&ln * &rn, ld.mul(&rd)),
                    BinOp::Div => {
                        let (m, c) = match rn.terms().collect::<Vec<_>>().as_slice() {
                            [(m, c)] => ((*m).clone(), (*c).clone()),
                            _ => return Err(Error::validation("divisor is not a monomial")),
                        };
                        (ln.mul_monomial(&rd, &c.recip()), ld.mul(&m))
                    }
                }
            }
        })
    }

    fn scalar(&self, a: &Ast) -> Result<Expr> {
        let (n, d) = self.fraction(a)?;
        if !d.is_one() {
            return Err(Error::validation("parameter denominators are not allowed in field coefficients"));
        }
        Ok(n)
    }

    fn lin(&self, a: &Ast) -> Result<Lin> {
        let minus_one = Rational::from_integer((-1).into());
        Ok(match a {
            Ast::Basis(z) => Lin::Field(VectorField::translation(&self.symbol(z))),
            Ast::Var(s) => match self.fields.iter().find(|(n, _)| n == s) {
                Some((_, v)) => Lin::Field(v.clone()),
                None => Lin::Scalar(self.scalar(a)?),
            },
            Ast::Neg(x) => match self.lin(x)? {
                Lin::Field(v) => Lin::Field(v.scale_rational(&minus_one)),
                Lin::Scalar(s) => Lin::Scalar(-s),
            },
            Ast::Bin(op, l, r) => match (op, self.lin(l)?, self.lin(r)?) {
                (BinOp::Add, Lin::Field(v), Lin::Field(w)) => Lin::Field(v.add(&w)),
                (BinOp::Sub, Lin::Field(v), Lin::Field(w)) => Lin::Field(v.add(&w.scale_rational(&minus_one))),
                (BinOp::Mul, Lin::Scalar(s), Lin::Field(v)) | (BinOp::Mul, Lin::Field(v), Lin::Scalar(s)) => {
                    Lin::Field(v.scale(&s))
                }
                (BinOp::Div, Lin::Field(v), Lin::Scalar(s)) => match s.as_constant() {
                    Some(c) if !c.is_zero() => Lin::Field(v.scale_rational(&c.recip())),
                    _ => return Err(Error::validation("field divisors must be nonzero integers")),
                },
                (_, Lin::Scalar(_), Lin::Scalar(_)) => Lin::Scalar(self.scalar(a)?),
                _ => return Err(Error::validation("field expression is not linear in d/dX")),
            },
            Ast::Num(_) | Ast::Jet(_) | Ast::Pow(..) => Lin::Scalar(self.scalar(a)?),
        })
    }

    fn vector_field(&self, a: &Ast) -> Result<VectorField> {
        match self.lin(a)? {
            Lin::Field(v) => Ok(v),
            Lin::Scalar(_) => Err(Error::validation("expected a vector field")),
        }
    }
}

enum Lin {
    Scalar(Expr),
    Field(VectorField),
}

fn check_exponents(e: &Expr, what: &str) -> Result<()> {
    match e.terms().map(|(m, _)| m.max_exponent()).max() {
        Some(k) if k > DEFAULT_MAX_EXPONENT => Err(Error::Capacity(format!(
            "{what}: exponent {k} exceeds the bound {DEFAULT_MAX_EXPONENT}"
        ))),
        _ => Ok(()),
    }
}

/// Clears parameter denominators equation by equation and builds the named
/// fields in order.
pub fn lower(spec: &SourceSpec) -> Result<Problem> {
    let space = JetSpace::new(
        spec.independents.iter().map(|n| Symbol::independent(n)).collect(),
        spec.dependents.iter().map(|n| Symbol::dependent(n)).collect(),
    )?;
    let mut fields: Vec<(String, VectorField)> = Vec::new();
    let mut equations = Vec::new();
    let mut leading = Vec::new();
    {
        let ctx = Ctx { spec, fields: &fields };
        for (i, eq) in spec.equations.iter().enumerate() {
            let (ln, ld) = ctx.fraction(&eq.lhs)?;
            let (rn, rd) = ctx.fraction(&eq.rhs)?;
            let m = lcm(&ld, &rd);
            let one = Rational::from_integer(1.into());
            let e = ln.mul_monomial(&quotient(&m, &ld), &one) - rn.mul_monomial(&quotient(&m, &rd), &one);
            check_exponents(&e, &format!("equation {}", i + 1))?;
            if e.is_zero() {
                return Err(Error::validation(format!("equation {} is identically zero", i + 1)));
            }
            equations.push(e);
            leading.push(eq.leading.as_ref().map(|d| ctx.jet(d)));
        }
    }
    for v in &spec.vfields {
        let f = Ctx { spec, fields: &fields }.vector_field(&v.body)?;
        for (_, c) in f.components() {
            check_exponents(c, &format!("vfield {}", v.name))?;
        }
        fields.push((v.name.clone(), f));
    }
    let parameters: Vec<Symbol> = spec.parameters.iter().map(|p| Symbol::parameter(&p.name)).collect();
    let nonzero = spec
        .parameters
        .iter()
        .filter(|p| p.nonzero)
        .map(|p| Symbol::parameter(&p.name))
        .collect();
    Ok(Problem {
        spec: spec.clone(),
        raw: RawSystem {
            space,
            parameters,
            nonzero,
            equations,
        },
        leading,
        vfields: fields,
        ansatz_degree: spec.options.ansatz_degree.unwrap_or(DEFAULT_ANSATZ_DEGREE),
        prolong_order: spec.options.prolong_order,
    })
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem> {
        lower(&super::parse(text)?)
    }

    pub fn space(&self) -> &JetSpace {
        &self.raw.space
    }

    /// Solved forms, closed to `option prolong_order` when it is given.
    pub fn system(&self) -> Result<PdeSystem> {
        let natural = solved_forms(&self.raw, &self.leading)?;
        match self.prolong_order {
            Some(p) if p < natural.order => Err(Error::validation(format!(
                "prolong_order {p} is below the system order {}",
                natural.order
            ))),
            Some(p) if p > natural.order => solved_forms_to_order(&self.raw, &self.leading, p),
            _ => Ok(natural),
        }
    }

    pub fn vfield(&self, name: &str) -> Option<&VectorField> {
        self.vfields.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// A named field, or a field expression over the file's declarations.
    pub fn field(&self, text: &str) -> Result<VectorField> {
        if let Some(v) = self.vfield(text.trim()) {
            return Ok(v.clone());
        }
        let ast = parse_field(&self.spec, text)?;
        Ctx {
            spec: &self.spec,
            fields: &self.vfields,
        }
        .vector_field(&ast)
    }
}

fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    let mut f: BTreeMap<Atom, u32> = BTreeMap::new();
    for (x, k) in a.factors().iter().chain(b.factors()) {
        let e = f.entry(x.clone()).or_insert(0);
        *e = (*e).max(*k);
    }
    Monomial::from_factors(f)
}

fn quotient(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::from_factors(a.factors().iter().map(|(x, k)| (x.clone(), k - b.degree_in(x))))
}
