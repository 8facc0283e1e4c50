//! Canonical multivariate polynomials with exact rational coefficients.
//!
//! An [`Expr`] is a finite map from [`Monomial`] to a nonzero rational. Two
//! expressions are equal exactly when they are algebraically equal, so `==`
//! is a zero test. Atoms are ordered by kind, then name, then multi-index
//! (see [`SymbolKind`] for the kind order), which makes every rendering
//! reproducible.

mod atom;
mod monomial;
mod raw;
mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use atom::{Atom, ExpAtom, Symbol, SymbolKind};
pub use monomial::Monomial;
pub use raw::{normalize, normalize_with, RawExpr, DEFAULT_MAX_EXPONENT};
pub use render::{AtomPowerJson, ExprJson, TermJson};

use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn atom(a: impl Into<Atom>) -> Self {
        Self::term(Monomial::atom(a.into()), Rational::one())
    }

    pub fn symbol(s: &Symbol) -> Self {
        Self::atom(s)
    }

    /// `exp(rate * arg)`; rate zero gives 1.
    pub fn exp(rate: Rational, arg: &Symbol) -> Self {
        if rate.is_zero() {
            return Expr::one();
        }
        Self::atom(Atom::Exp(ExpAtom::new(rate, arg.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The rational value if this expression has no atoms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut e = Expr::zero();
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| a.clone()))
            .collect()
    }

    pub fn contains_atom(&self, atom: &Atom) -> bool {
        self.terms.keys().any(|m| m.degree_in(atom) > 0)
    }

    pub fn contains_where(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| pred(a)))
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.terms.keys().map(|m| m.degree_in(atom)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(n, k)| (n.mul(m), k * c)))
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `atom`, treating every other
    /// atom as a constant. Differentiating by a group parameter also acts on
    /// the exponential atoms of that parameter.
    pub fn partial(&self, atom: &Atom) -> Expr {
        let group_arg = match atom {
            Atom::Symbol(s) if s.kind() == SymbolKind::GroupParameter => Some(s),
            _ => None,
        };
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.divide_atom(atom) {
                out.add_term(rest, c * Rational::from_integer(e.into()));
            }
            if let Some(arg) = group_arg {
                for (a, _) in m.factors() {
                    if let Atom::Exp(x) = a {
                        if &x.arg == arg {
                            out.add_term(m.clone(), c * &x.rate);
                        }
                    }
                }
            }
        }
        out
    }

    /// Simultaneous substitution followed by normalization.
    ///
    /// A binding may mention its own atom (`x -> x + eps`); a cycle through
    /// two or more bound atoms is rejected. Binding a group parameter to a
    /// rational-linear combination of group parameters also rewrites its
    /// exponential atoms.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        check_acyclic(bindings)?;
        self.substitute_unchecked(bindings)
    }

    pub(crate) fn substitute_unchecked(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut exp_rewrites: BTreeMap<Symbol, Vec<(Symbol, Rational)>> = BTreeMap::new();
        for (a, e) in bindings {
            if let Atom::Symbol(s) = a {
                if s.kind() == SymbolKind::GroupParameter {
                    if let Some(lin) = group_linear_form(e) {
                        exp_rewrites.insert(s.clone(), lin);
                    }
                }
            }
        }
        let mut powers: BTreeMap<(Atom, u32), Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut kept: Vec<(Atom, u32)> = Vec::new();
            let mut product = Expr::constant(c.clone());
            for (a, e) in m.factors() {
                if let Some(rep) = bindings.get(a) {
                    let key = (a.clone(), *e);
                    let p = powers.entry(key).or_insert_with(|| rep.pow(*e)).clone();
                    product = &product * &p;
                } else if let Atom::Exp(x) = a {
                    if let Some(lin) = exp_rewrites.get(&x.arg) {
                        for (s, k) in lin {
                            kept.push((Atom::Exp(ExpAtom::new(&x.rate * k, s.clone())), 1));
                        }
                    } else if bindings.keys().any(|b| matches!(b, Atom::Symbol(s) if *s == x.arg)) {
                        return Err(Error::unsupported(format!(
                            "cannot substitute into {a}: replacement for {} is not a linear form in group parameters",
                            x.arg
                        )));
                    } else {
                        kept.push((a.clone(), *e));
                    }
                } else {
                    kept.push((a.clone(), *e));
                }
                if product.is_zero() {
                    break;
                }
            }
            if product.is_zero() {
                continue;
            }
            let keep = Monomial::from_factors(kept);
            for (pm, pc) in product.terms {
                out.add_term(pm.mul(&keep), pc);
            }
        }
        Ok(out)
    }

    /// Single-atom convenience wrapper around [`Expr::substitute`].
    pub fn subs(&self, atom: impl Into<Atom>, value: &Expr) -> Result<Expr> {
        let mut b = BTreeMap::new();
        b.insert(atom.into(), value.clone());
        self.substitute(&b)
    }

    /// Groups terms by their power product over the focus atoms.
    ///
    /// The result satisfies `self == sum(monomial * coefficient)` and no
    /// coefficient contains a focus atom.
    pub fn collect(&self, focus: &BTreeSet<Atom>) -> BTreeMap<Monomial, Expr> {
        self.collect_where(|a| focus.contains(a))
    }

    pub fn collect_where(&self, pred: impl Fn(&Atom) -> bool) -> BTreeMap<Monomial, Expr> {
        let mut out: BTreeMap<Monomial, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (focus, rest) = m.split(&pred);
            out.entry(focus).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Coefficients of the powers of a single atom: `self = sum_k c_k * atom^k`.
    pub fn powers_of(&self, atom: &Atom) -> BTreeMap<u32, Expr> {
        let mut out: BTreeMap<u32, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(atom);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, e| !e.is_zero());
        out
    }

    /// Evaluates at rational values; `value` must cover every atom present.
    pub fn eval(&self, value: impl Fn(&Atom) -> Option<Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        let mut cache: BTreeMap<Atom, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (a, e) in m.factors() {
                let v = match cache.get(a) {
                    Some(v) => v.clone(),
                    None => {
                        let v = value(a)
                            .ok_or_else(|| Error::validation(format!("no value for atom {a}")))?;
                        cache.insert(a.clone(), v.clone());
                        v
                    }
                };
                t *= pow_rational(&v, *e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Gcd of numerators over lcm of denominators, signed so that the first
    /// term becomes positive after division.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num_integer::Integer::gcd(&num, c.numer());
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let mut r = Rational::new(num, den);
        if let Some(first) = self.terms.values().next() {
            if first.is_negative() {
                r = -r;
            }
        }
        r
    }

    /// The expression divided by its content: integer coefficients, no common
    /// factor, first term positive.
    pub fn primitive(&self) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Maps every coefficient through `f`, dropping zeros.
    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub(crate) fn pow_rational(v: &Rational, e: u32) -> Rational {
    num_traits::pow::pow(v.clone(), e as usize)
}

/// If `e` is `sum k_i * eps_i` over group parameters with rational `k_i`
/// and no constant term, returns those pairs.
fn group_linear_form(e: &Expr) -> Option<Vec<(Symbol, Rational)>> {
    let mut out = Vec::new();
    for (m, c) in e.terms() {
        match m.factors() {
            [(Atom::Symbol(s), 1)] if s.kind() == SymbolKind::GroupParameter => {
                out.push((s.clone(), c.clone()))
            }
            _ => return None,
        }
    }
    Some(out)
}

fn check_acyclic(bindings: &BTreeMap<Atom, Expr>) -> Result<()> {
    let keys: Vec<&Atom> = bindings.keys().collect();
    let index: BTreeMap<&Atom, usize> = keys.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let edges: Vec<Vec<usize>> = keys
        .iter()
        .map(|a| {
            let rep = &bindings[*a];
            rep.atoms()
                .iter()
                .filter(|b| b != a)
                .filter_map(|b| index.get(b).copied())
                .collect()
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; keys.len()];
    fn visit(i: usize, edges: &[Vec<usize>], state: &mut [u8]) -> bool {
        if state[i] == 1 {
            return false;
        }
        if state[i] == 2 {
            return true;
        }
        state[i] = 1;
        for &j in &edges[i] {
            if !visit(j, edges, state) {
                return false;
            }
        }
        state[i] = 2;
        true
    }
    for i in 0..keys.len() {
        if !visit(i, &edges, &mut state) {
            return Err(Error::validation(format!(
                "cyclic substitution through {}",
                keys[i]
            )));
        }
    }
    Ok(())
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Atom> for Expr {
    fn from(a: Atom) -> Self {
        Expr::atom(a)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::atom(s)
    }
}

impl<'a> Add<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Expr> for &'a Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Expr> for &'a Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut out = Expr::zero();
        for e in iter {
            out += e;
        }
        out
    }
}

#[cfg(test)]
mod tests;
