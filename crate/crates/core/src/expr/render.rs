use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{Expr, Monomial, SymbolKind};

/// JSON form of an expression: `{"terms":[{"coeff":"p/q","atoms":[...]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprJson {
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub atoms: Vec<AtomPowerJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomPowerJson {
    pub atom: String,
    pub power: u32,
}

impl Expr {
    pub fn to_json(&self) -> ExprJson {
        ExprJson {
            terms: self
                .ordered_terms()
                .into_iter()
                .map(|(m, c)| TermJson {
                    coeff: c.to_string(),
                    atoms: m
                        .factors()
                        .iter()
                        .map(|(a, e)| AtomPowerJson {
                            atom: a.to_string(),
                            power: *e,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    // Canonical order, except that terms in variables come before terms
    // built only from parameters, and the constant term is last.
    fn ordered_terms(&self) -> Vec<(&Monomial, &crate::Rational)> {
        let rank = |m: &Monomial| {
            if m.is_one() {
                2
            } else if m.factors().iter().all(|(a, _)| {
                matches!(a.kind(), SymbolKind::Parameter | SymbolKind::GroupParameter)
            }) {
                1
            } else {
                0
            }
        };
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|(m, _)| rank(m));
        v
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.ordered_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
