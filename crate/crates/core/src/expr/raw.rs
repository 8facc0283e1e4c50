use super::{Atom, Expr};
use crate::{Error, Rational, Result};

pub const DEFAULT_MAX_EXPONENT: u32 = 64;

/// An unnormalized expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum RawExpr {
    Atom(Atom),
    Num(Rational),
    Add(Vec<RawExpr>),
    Sub(Box<RawExpr>, Box<RawExpr>),
    Mul(Vec<RawExpr>),
    Neg(Box<RawExpr>),
    Pow(Box<RawExpr>, u32),
}

impl RawExpr {
    pub fn atom(a: impl Into<Atom>) -> Self {
        RawExpr::Atom(a.into())
    }

    pub fn int(n: i64) -> Self {
        RawExpr::Num(Rational::from_integer(n.into()))
    }

    pub fn add(items: impl IntoIterator<Item = RawExpr>) -> Self {
        RawExpr::Add(items.into_iter().collect())
    }

    pub fn mul(items: impl IntoIterator<Item = RawExpr>) -> Self {
        RawExpr::Mul(items.into_iter().collect())
    }

    pub fn sub(a: RawExpr, b: RawExpr) -> Self {
        RawExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn neg(a: RawExpr) -> Self {
        RawExpr::Neg(Box::new(a))
    }

    pub fn pow(a: RawExpr, n: u32) -> Self {
        RawExpr::Pow(Box::new(a), n)
    }
}

/// Normalizes with the default exponent bound.
pub fn normalize(raw: &RawExpr) -> Result<Expr> {
    normalize_with(raw, DEFAULT_MAX_EXPONENT)
}

/// Normalizes a tree into canonical form, failing if any atom's exponent in
/// the result (or in an intermediate power) exceeds `max_exponent`.
pub fn normalize_with(raw: &RawExpr, max_exponent: u32) -> Result<Expr> {
    let e = go(raw, max_exponent)?;
    check(&e, max_exponent)?;
    Ok(e)
}

fn go(raw: &RawExpr, max: u32) -> Result<Expr> {
    Ok(match raw {
        RawExpr::Atom(a) => Expr::atom(a.clone()),
        RawExpr::Num(q) => Expr::constant(q.clone()),
        RawExpr::Add(items) => {
            let mut out = Expr::zero();
            for it in items {
                out += go(it, max)?;
            }
            out
        }
        RawExpr::Sub(a, b) => go(a, max)? - go(b, max)?,
        RawExpr::Mul(items) => {
            let mut out = Expr::one();
            for it in items {
                out = &out * &go(it, max)?;
                check(&out, max)?;
            }
            out
        }
        RawExpr::Neg(a) => -go(a, max)?,
        RawExpr::Pow(a, n) => {
            let base = go(a, max)?;
            let top = base
                .terms()
                .map(|(m, _)| m.max_exponent() as u64)
                .max()
                .unwrap_or(0);
            if top * (*n as u64) > max as u64 {
                return Err(Error::Capacity(format!(
                    "exponent {} exceeds the bound {max}",
                    top * (*n as u64)
                )));
            }
            base.pow(*n)
        }
    })
}

fn check(e: &Expr, max: u32) -> Result<()> {
    for (m, _) in e.terms() {
        if m.max_exponent() > max {
            return Err(Error::Capacity(format!(
                "exponent {} exceeds the bound {max}",
                m.max_exponent()
            )));
        }
    }
    Ok(())
}
