//! Jet coordinates and total derivatives.
//!
//! A [`JetCoordinate`] is a dependent variable together with a symmetric
//! [`MultiIndex`], so `U_xy` and `U_yx` are the same atom. Jet atoms are
//! created on demand; there is no fixed order cap.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{Atom, Expr, Monomial, Symbol, SymbolKind};
use crate::{Error, Rational, Result};

/// Derivative counts per variable; zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<(Symbol, u32)>);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut map: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, c) in counts {
            *map.entry(s).or_default() += c;
        }
        MultiIndex(map.into_iter().filter(|(_, c)| *c > 0).collect())
    }

    /// One count per listed variable, repeats allowed: `[x, y, y]` is `x y^2`.
    pub fn from_vars<'a>(vars: impl IntoIterator<Item = &'a Symbol>) -> Self {
        Self::from_counts(vars.into_iter().map(|s| (s.clone(), 1)))
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|(_, c)| *c).sum()
    }

    pub fn count(&self, var: &Symbol) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| s == var)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    pub fn counts(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn increment(&self, var: &Symbol) -> MultiIndex {
        Self::from_counts(self.0.iter().cloned().chain([(var.clone(), 1)]))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        Self::from_counts(self.0.iter().cloned().chain(other.0.iter().cloned()))
    }

    /// `self - other` when every count of `other` fits.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::new();
        for (s, c) in &self.0 {
            let d = other.count(s);
            if d > *c {
                return None;
            }
            out.push((s.clone(), c - d));
        }
        if other.0.iter().any(|(s, _)| self.count(s) == 0) {
            return None;
        }
        Some(Self::from_counts(out))
    }

    /// The variables with multiplicity, in variable order.
    pub fn vars(&self) -> Vec<Symbol> {
        self.0
            .iter()
            .flat_map(|(s, c)| std::iter::repeat(s.clone()).take(*c as usize))
            .collect()
    }

    /// All multi-indices of exactly `order` over `vars`.
    pub fn all_of_order(vars: &[Symbol], order: u32) -> Vec<MultiIndex> {
        fn rec(vars: &[Symbol], left: u32, acc: &mut Vec<(Symbol, u32)>, out: &mut Vec<MultiIndex>) {
            match vars.split_first() {
                None => {
                    if left == 0 {
                        out.push(MultiIndex::from_counts(acc.iter().cloned()));
                    }
                }
                Some((first, rest)) => {
                    for c in (0..=left).rev() {
                        acc.push((first.clone(), c));
                        rec(rest, left - c, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        rec(vars, order, &mut Vec::new(), &mut out);
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Lower order first; within an order, higher counts of earlier variables
// first, so U_xx < U_xy < U_yy.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| {
            let mut vars: Vec<&Symbol> = self.0.iter().chain(other.0.iter()).map(|(s, _)| s).collect();
            vars.sort();
            vars.dedup();
            for v in vars {
                match other.count(v).cmp(&self.count(v)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

/// `u^alpha_J`: a dependent variable (or unknown function) and a multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetCoordinate {
    pub dependent: Symbol,
    pub index: MultiIndex,
}

impl JetCoordinate {
    pub fn new(dependent: Symbol, index: MultiIndex) -> Self {
        JetCoordinate { dependent, index }
    }

    pub fn base(dependent: &Symbol) -> Self {
        Self::new(dependent.clone(), MultiIndex::zero())
    }

    pub fn of(dependent: &Symbol, vars: &[&Symbol]) -> Self {
        Self::new(dependent.clone(), MultiIndex::from_vars(vars.iter().copied()))
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }

    pub fn derive(&self, var: &Symbol) -> JetCoordinate {
        Self::new(self.dependent.clone(), self.index.increment(var))
    }

    pub fn derive_multi(&self, index: &MultiIndex) -> JetCoordinate {
        Self::new(self.dependent.clone(), self.index.add(index))
    }

    /// True if `self` is a (possibly trivial) derivative of `other`.
    pub fn is_derivative_of(&self, other: &JetCoordinate) -> bool {
        self.dependent == other.dependent && self.index.checked_sub(&other.index).is_some()
    }
}

impl fmt::Display for JetCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.is_zero() {
            return write!(f, "{}", self.dependent);
        }
        write!(f, "D({}", self.dependent)?;
        for v in self.index.vars() {
            write!(f, ",{v}")?;
        }
        f.write_str(")")
    }
}

/// Independent and dependent variables of a PDE system, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetSpace {
    independents: Vec<Symbol>,
    dependents: Vec<Symbol>,
}

impl JetSpace {
    pub fn new(independents: Vec<Symbol>, dependents: Vec<Symbol>) -> Result<Self> {
        if independents.iter().any(|s| s.kind() != SymbolKind::Independent) {
            return Err(Error::validation("independent list holds a non-independent symbol"));
        }
        if dependents.iter().any(|s| s.kind() != SymbolKind::Dependent) {
            return Err(Error::validation("dependent list holds a non-dependent symbol"));
        }
        Ok(JetSpace {
            independents,
            dependents,
        })
    }

    pub fn independents(&self) -> &[Symbol] {
        &self.independents
    }

    pub fn dependents(&self) -> &[Symbol] {
        &self.dependents
    }

    /// Base coordinates: independents then dependents.
    pub fn base_coordinates(&self) -> Vec<Symbol> {
        self.independents.iter().chain(&self.dependents).cloned().collect()
    }

    pub fn is_independent(&self, s: &Symbol) -> bool {
        self.independents.contains(s)
    }

    /// Every jet coordinate of order `1..=order`, grouped by dependent.
    pub fn jet_coordinates(&self, order: u32) -> Vec<JetCoordinate> {
        let mut out = Vec::new();
        for u in &self.dependents {
            for k in 1..=order {
                for idx in MultiIndex::all_of_order(&self.independents, k) {
                    out.push(JetCoordinate::new(u.clone(), idx));
                }
            }
        }
        out
    }

    /// `D_var` applied to a single atom.
    fn total_derivative_of_atom(&self, atom: &Atom, var: &Symbol) -> Result<Expr> {
        Ok(match atom {
            Atom::Symbol(s) => {
                if s == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Atom::Jet(j) => match j.dependent.kind() {
                SymbolKind::Dependent => Expr::atom(j.derive(var)),
                SymbolKind::Function => {
                    // f is a function of every base coordinate.
                    let mut e = Expr::atom(j.derive(var));
                    for u in &self.dependents {
                        let ux = JetCoordinate::new(u.clone(), MultiIndex::from_vars([var]));
                        e += Expr::atom(ux) * Expr::atom(j.derive(u));
                    }
                    e
                }
                _ => Expr::zero(),
            },
            Atom::Exp(_) => {
                return Err(Error::validation(format!(
                    "total derivative of a group-parameter atom {atom}"
                )))
            }
        })
    }

    /// `D_var e = de/dvar + sum u_{J+var} de/du_J`, extended to unknown functions
    /// of the base coordinates by the chain rule.
    pub fn total_derivative(&self, e: &Expr, var: &Symbol) -> Result<Expr> {
        if !self.is_independent(var) {
            return Err(Error::validation(format!("{var} is not an independent variable")));
        }
        let mut cache: BTreeMap<&Atom, Expr> = BTreeMap::new();
        let mut out = Expr::zero();
        for (m, c) in e.terms() {
            for (a, k) in m.factors() {
                if !cache.contains_key(a) {
                    cache.insert(a, self.total_derivative_of_atom(a, var)?);
                }
                let da = &cache[a];
                if da.is_zero() {
                    continue;
                }
                let (_, rest) = m.divide_atom(a).expect("factor present");
                let scale = c * Rational::from_integer((*k).into());
                for (dm, dc) in da.terms() {
                    out.add_term(rest.mul(dm), &scale * dc);
                }
            }
        }
        Ok(out)
    }

    /// `D_J e`; the order of application is irrelevant.
    pub fn total_derivative_multi(&self, e: &Expr, index: &MultiIndex) -> Result<Expr> {
        let mut out = e.clone();
        for v in index.vars() {
            out = self.total_derivative(&out, &v)?;
        }
        Ok(out)
    }
}

/// Monomial of one jet atom, handy in tests and reports.
pub fn jet_monomial(j: &JetCoordinate) -> Monomial {
    Monomial::atom(Atom::Jet(j.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> JetSpace {
        JetSpace::new(
            vec![Symbol::independent("x"), Symbol::independent("y")],
            ["U", "V", "P", "T"].iter().map(|n| Symbol::dependent(n)).collect(),
        )
        .unwrap()
    }

    fn jet(dep: &str, vars: &[&str]) -> Expr {
        let vs: Vec<Symbol> = vars.iter().map(|v| Symbol::independent(v)).collect();
        Expr::atom(JetCoordinate::new(Symbol::dependent(dep), MultiIndex::from_vars(&vs)))
    }

    #[test]
    fn product_rule_on_dependents() {
        let s = space();
        let x = Symbol::independent("x");
        let uv = jet("U", &[]) * jet("V", &[]);
        let d = s.total_derivative(&uv, &x).unwrap();
        assert_eq!(d, jet("U", &["x"]) * jet("V", &[]) + jet("U", &[]) * jet("V", &["x"]));
    }

    #[test]
    fn independent_and_index_increment() {
        let s = space();
        let x = Symbol::independent("x");
        let y = Symbol::independent("y");
        let xy = Expr::symbol(&x) * Expr::symbol(&y);
        assert_eq!(s.total_derivative(&xy, &y).unwrap(), Expr::symbol(&x));
        assert_eq!(s.total_derivative(&jet("T", &["y"]), &x).unwrap(), jet("T", &["x", "y"]));
        assert_eq!(jet("T", &["x", "y"]), jet("T", &["y", "x"]));
    }

    #[test]
    fn multi_index_derivatives() {
        let s = space();
        let x = Symbol::independent("x");
        let y = Symbol::independent("y");
        let u = jet("U", &[]);
        let dxy = MultiIndex::from_vars([&x, &y]);
        assert_eq!(s.total_derivative_multi(&u, &dxy).unwrap(), jet("U", &["x", "y"]));
        let dyy = MultiIndex::from_vars([&y, &y]);
        assert!(s.total_derivative_multi(&Expr::symbol(&x), &dyy).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_independent() {
        let s = space();
        let err = s.total_derivative(&jet("U", &[]), &Symbol::dependent("U"));
        assert!(matches!(err, Err(Error::Validation(_))));
        let eps = Symbol::group_parameter("eps");
        let e = Expr::exp(Rational::from_integer(1.into()), &eps);
        assert!(s.total_derivative(&e, &Symbol::independent("x")).is_err());
    }

    #[test]
    fn unknown_function_chain_rule() {
        let s = space();
        let x = Symbol::independent("x");
        let f = Symbol::function("f");
        let fe = Expr::atom(&f);
        let d = s.total_derivative(&fe, &x).unwrap();
        let fj = |v: Symbol| Expr::atom(JetCoordinate::new(f.clone(), MultiIndex::from_vars([&v])));
        let mut expect = fj(x.clone());
        for u in ["U", "V", "P", "T"] {
            expect += jet(u, &["x"]) * fj(Symbol::dependent(u));
        }
        assert_eq!(d, expect);
    }

    #[test]
    fn multi_index_order_and_enumeration() {
        let x = Symbol::independent("x");
        let y = Symbol::independent("y");
        let all = MultiIndex::all_of_order(&[x.clone(), y.clone()], 2);
        assert_eq!(all.len(), 3);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted[0], MultiIndex::from_vars([&x, &x]));
        assert_eq!(sorted[1], MultiIndex::from_vars([&x, &y]));
        assert_eq!(sorted[2], MultiIndex::from_vars([&y, &y]));
        assert_eq!(space().jet_coordinates(2).len(), 4 * 5);
    }

    use proptest::prelude::*;

    fn arb_jet_expr() -> impl Strategy<Value = Expr> {
        let atom = prop_oneof![
            prop::sample::select(vec!["x", "y"]).prop_map(|v| Expr::symbol(&Symbol::independent(v))),
            (prop::sample::select(vec!["U", "V", "P", "T"]), prop::collection::vec(prop::sample::select(vec!["x", "y"]), 0..3))
                .prop_map(|(d, vs)| jet(d, &vs)),
        ];
        prop::collection::vec((-3i64..=3, prop::collection::vec(atom, 0..3)), 0..4).prop_map(|terms| {
            terms.into_iter().fold(Expr::zero(), |acc, (c, fs)| {
                acc + fs.into_iter().fold(Expr::int(c), |m, f| &m * &f)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn total_derivative_leibniz(f in arb_jet_expr(), g in arb_jet_expr(), i in 0usize..2) {
            let s = space();
            let x = s.independents()[i].clone();
            let lhs = s.total_derivative(&(&f * &g), &x).unwrap();
            let rhs = &s.total_derivative(&f, &x).unwrap() * &g + &f * &s.total_derivative(&g, &x).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn total_derivatives_commute(f in arb_jet_expr()) {
            let s = space();
            let (x, y) = (Symbol::independent("x"), Symbol::independent("y"));
            let xy = s.total_derivative(&s.total_derivative(&f, &x).unwrap(), &y).unwrap();
            let yx = s.total_derivative(&s.total_derivative(&f, &y).unwrap(), &x).unwrap();
            prop_assert_eq!(&xy, &yx);
            let idx = MultiIndex::from_vars([&x, &y]);
            prop_assert_eq!(s.total_derivative_multi(&f, &idx).unwrap(), xy);
        }
    }
}
