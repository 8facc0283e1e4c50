use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use super::{adjoint_matrix, maximal_minors, AdjointMatrix, AlgebraVector, LieAlgebra};
use crate::expr::{Atom, Expr, Symbol, SymbolKind};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Closed,
    /// Closed exactly when every listed polynomial vanishes.
    ClosedUnder(Vec<Expr>),
    NotClosed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubalgebraCheck {
    pub verdict: Verdict,
    /// Nonzero maximal minors of the generators; independence holds
    /// wherever one of them is nonzero.
    pub independence: Vec<Expr>,
}

impl SubalgebraCheck {
    pub fn generically_independent(&self) -> bool {
        !self.independence.is_empty()
    }
}

fn nonzero_primitives(es: impl IntoIterator<Item = Expr>) -> Vec<Expr> {
    let set: BTreeSet<Expr> = es.into_iter().filter(|e| !e.is_zero()).map(|e| e.primitive()).collect();
    set.into_iter().collect()
}

/// Closure of the span of `vectors` under the bracket, decided through the
/// `(s+1)`-minors of `[vectors; [x_i, x_j]]`.
pub fn is_subalgebra(g: &LieAlgebra, vectors: &[AlgebraVector]) -> SubalgebraCheck {
    let rows: Vec<Vec<Expr>> = vectors.iter().map(|v| v.coords.clone()).collect();
    let independence = nonzero_primitives(maximal_minors(&rows));
    let mut conditions = Vec::new();
    if vectors.len() < g.dim() {
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                let b = g.bracket(&vectors[i], &vectors[j]);
                let mut m = rows.clone();
                m.push(b.coords);
                conditions.extend(maximal_minors(&m));
            }
        }
    }
    let conditions = nonzero_primitives(conditions);
    let verdict = if conditions.is_empty() {
        Verdict::Closed
    } else if conditions.iter().any(Expr::is_constant) {
        Verdict::NotClosed
    } else {
        Verdict::ClosedUnder(conditions)
    };
    SubalgebraCheck { verdict, independence }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMove {
    pub generator: usize,
    pub epsilon: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub input: Vec<Rational>,
    pub moves: Vec<AdjointMove>,
    pub scale: Rational,
    pub result: Vec<Rational>,
}

impl Normalized {
    /// Applies the transcript to the input again.
    pub fn replay(&self, g: &LieAlgebra) -> Result<Vec<Rational>> {
        let eps = Symbol::group_parameter("eps");
        let mut x = AlgebraVector::from_rationals(&self.input);
        for m in &self.moves {
            let a = adjoint_matrix(g, m.generator, &eps)?.at(&Expr::constant(m.epsilon.clone()))?;
            x = a.apply(&x);
        }
        let x = x.scale(&Expr::constant(self.scale.clone()));
        x.as_rationals().ok_or_else(|| Error::Closure("replay left symbolic coordinates".into()))
    }
}

fn polynomial_adjoints(g: &LieAlgebra) -> Result<Vec<AdjointMatrix>> {
    let eps = Symbol::group_parameter("eps");
    let mut out = Vec::new();
    for i in 0..g.dim() {
        match adjoint_matrix(g, i, &eps) {
            Ok(m) if m.is_polynomial() && !m.is_identity() => out.push(m),
            Ok(_) | Err(Error::NotSupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `new_k(eps) = c0 + c1 eps`; returns `(c0, c1)` if the coordinate is affine.
fn affine_coordinate(m: &AdjointMatrix, x: &AlgebraVector, k: usize) -> Option<(Expr, Expr)> {
    let mut e = Expr::zero();
    for (j, xj) in x.coords.iter().enumerate() {
        e += xj * &m.entries[j][k];
    }
    let p = e.powers_of(&Atom::from(&m.parameter));
    if p.keys().any(|&d| d > 1) {
        return None;
    }
    let c1 = p.get(&1).cloned().unwrap_or_default();
    if c1.is_zero() {
        return None;
    }
    Some((p.get(&0).cloned().unwrap_or_default(), c1))
}

fn zero_set(x: &AlgebraVector) -> BTreeSet<usize> {
    (0..x.len()).filter(|&k| x.coords[k].is_zero()).collect()
}

/// Greedy normal form under polynomial adjoint moves, then scaling so the
/// highest-index nonzero coordinate is 1.
///
/// Coordinates are eliminated in ascending index order; among moves that
/// kill a coordinate without reviving a zero one, the smallest `|eps|`
/// wins, then the lowest generator index.
pub fn normalize_1d(g: &LieAlgebra, x: &[Rational]) -> Result<Normalized> {
    if x.len() != g.dim() {
        return Err(Error::validation("vector length differs from the algebra dimension"));
    }
    if x.iter().all(Zero::is_zero) {
        return Err(Error::validation("cannot normalize the zero vector"));
    }
    let mats = polynomial_adjoints(g)?;
    let mut cur = AlgebraVector::from_rationals(x);
    let mut moves = Vec::new();
    for _ in 0..g.dim() * g.dim() + 1 {
        let zeros = zero_set(&cur);
        let mut best: Option<(Rational, usize, AlgebraVector)> = None;
        'coords: for k in 0..g.dim() {
            if zeros.contains(&k) {
                continue;
            }
            for m in &mats {
                let Some((c0, c1)) = affine_coordinate(m, &cur, k) else { continue };
                let (Some(c0), Some(c1)) = (c0.as_constant(), c1.as_constant()) else { continue };
                let eps = -c0 / c1;
                let next = m.at(&Expr::constant(eps.clone()))?.apply(&cur);
                let nz = zero_set(&next);
                if !zeros.is_subset(&nz) || nz.len() <= zeros.len() {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((b, gi, _)) => eps.abs() < b.abs() || (eps.abs() == b.abs() && m.generator < *gi),
                };
                if better {
                    best = Some((eps, m.generator, next));
                }
            }
            if best.is_some() {
                break 'coords;
            }
        }
        match best {
            Some((eps, gi, next)) => {
                moves.push(AdjointMove {
                    generator: gi,
                    epsilon: eps,
                });
                cur = next;
            }
            None => break,
        }
    }
    let v = cur.as_rationals().expect("rational moves keep rational coordinates");
    let top = (0..v.len()).rev().find(|&k| !v[k].is_zero()).expect("nonzero");
    let scale = v[top].recip();
    let result = v.iter().map(|c| c * &scale).collect();
    Ok(Normalized {
        input: x.to_vec(),
        moves,
        scale,
        result,
    })
}

/// Family of normal forms sharing a top coordinate: `sum_{j in support,
/// j != top} alpha_j v_j + v_top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimClass {
    pub top: usize,
    pub support: BTreeSet<usize>,
}

impl OneDimClass {
    pub fn display_with(&self, labels: &[String]) -> String {
        let mut parts: Vec<String> = self
            .support
            .iter()
            .filter(|&&j| j != self.top)
            .map(|&j| format!("α{}*{}", j + 1, labels[j]))
            .collect();
        parts.push(labels[self.top].clone());
        parts.join(" + ")
    }
}

/// Normal forms of every nonzero vector with coordinates drawn from `values`.
pub fn classify_1d(g: &LieAlgebra, values: &[Rational]) -> Result<Vec<OneDimClass>> {
    let n = g.dim();
    let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<Rational> = idx.iter().map(|&i| values[i].clone()).collect();
        if x.iter().any(|c| !c.is_zero()) {
            let r = normalize_1d(g, &x)?;
            let top = (0..n).rev().find(|&k| !r.result[k].is_zero()).expect("nonzero");
            let sup = classes.entry(top).or_default();
            sup.extend((0..n).filter(|&k| !r.result[k].is_zero()));
        }
        let Some(p) = (0..n).find(|&p| idx[p] + 1 < values.len()) else { break };
        idx[p] += 1;
        for q in idx.iter_mut().take(p) {
            *q = 0;
        }
    }
    Ok(classes.into_iter().map(|(top, support)| OneDimClass { top, support }).collect())
}

/// One branch of an extension problem: the candidate has its `top`
/// coordinate equal to 1 and higher ones zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionCase {
    pub top: usize,
    /// Fixed generators after the deductions below.
    pub fixed: Vec<AlgebraVector>,
    /// Symbols forced to zero by single-symbol conditions.
    pub forced: Vec<Atom>,
    /// Remaining polynomial conditions (all must vanish).
    pub conditions: Vec<Expr>,
    /// Adjoint moves fixing the fixed generators that simplify the candidate.
    pub moves: Vec<(usize, Expr)>,
    pub candidate: AlgebraVector,
    pub feasible: bool,
}

impl ExtensionCase {
    pub fn closes(&self) -> bool {
        self.feasible && self.conditions.is_empty()
    }

    pub fn subalgebra(&self) -> Vec<AlgebraVector> {
        let mut v = self.fixed.clone();
        v.push(self.candidate.clone());
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionConditions {
    pub fixed: Vec<AlgebraVector>,
    pub unknowns: Vec<Symbol>,
    /// The generic candidate after reduction modulo the fixed generators.
    pub generic: AlgebraVector,
    /// Conditions on the generic candidate before the case split.
    pub constraints: Vec<Expr>,
    pub cases: Vec<ExtensionCase>,
}

impl ExtensionConditions {
    /// Whether a concrete `y` extends the fixed generators to a subalgebra.
    pub fn admits(&self, g: &LieAlgebra, y: &AlgebraVector) -> bool {
        let mut v = self.fixed.clone();
        v.push(y.clone());
        let c = is_subalgebra(g, &v);
        c.verdict == Verdict::Closed && c.generically_independent()
    }
}

fn bind(atom: &Atom, value: &Expr) -> BTreeMap<Atom, Expr> {
    let mut b = BTreeMap::new();
    b.insert(atom.clone(), value.clone());
    b
}

fn subst_all(v: &AlgebraVector, b: &BTreeMap<Atom, Expr>) -> Result<AlgebraVector> {
    v.map(|e| e.substitute(b))
}

fn conditions_for(g: &LieAlgebra, fixed: &[AlgebraVector], x: &AlgebraVector) -> Vec<Expr> {
    let mut rows: Vec<Vec<Expr>> = fixed.iter().map(|f| f.coords.clone()).collect();
    rows.push(x.coords.clone());
    if rows.len() >= g.dim() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in fixed {
        let mut m = rows.clone();
        m.push(g.bracket(f, x).coords);
        out.extend(maximal_minors(&m));
    }
    nonzero_primitives(out)
}

/// A single-term condition in exactly one symbol forces that symbol to zero.
fn forced_symbol(c: &Expr) -> Option<Atom> {
    if c.len() != 1 {
        return None;
    }
    let atoms = c.atoms();
    (atoms.len() == 1).then(|| atoms.into_iter().next().expect("one atom"))
}

fn extend(g: &LieAlgebra, fixed: &[AlgebraVector]) -> Result<ExtensionConditions> {
    let n = g.dim();
    if fixed.iter().any(|f| f.len() != n) {
        return Err(Error::validation("vector length differs from the algebra dimension"));
    }
    let unknowns: Vec<Symbol> = (1..=n).map(|i| Symbol::unknown(&format!("a{i}"))).collect();

    // Pivots: a constant coordinate of one fixed vector where all others vanish.
    let mut pivots = BTreeSet::new();
    for (r, f) in fixed.iter().enumerate() {
        let p = (0..n).rev().find(|&p| {
            f.coords[p].as_constant().is_some_and(|c| !c.is_zero())
                && fixed.iter().enumerate().all(|(s, o)| s == r || o.coords[p].is_zero())
        });
        if let Some(p) = p {
            pivots.insert(p);
        }
    }
    let generic = AlgebraVector::new(
        (0..n)
            .map(|i| if pivots.contains(&i) { Expr::zero() } else { Expr::symbol(&unknowns[i]) })
            .collect(),
    );
    let constraints = conditions_for(g, fixed, &generic);
    let mats = polynomial_adjoints(g)?;

    let mut cases = Vec::new();
    for top in (0..n).rev().filter(|t| !pivots.contains(t)) {
        let mut b = BTreeMap::new();
        b.insert(Atom::from(&unknowns[top]), Expr::one());
        for j in top + 1..n {
            b.insert(Atom::from(&unknowns[j]), Expr::zero());
        }
        let mut x = subst_all(&generic, &b)?;
        let mut fx: Vec<AlgebraVector> = fixed.to_vec();
        let mut forced = Vec::new();
        let mut conds = conditions_for(g, &fx, &x);
        let mut feasible = true;
        while let Some(a) = conds.iter().find_map(forced_symbol) {
            let bz = bind(&a, &Expr::zero());
            x = subst_all(&x, &bz)?;
            fx = fx.iter().map(|f| subst_all(f, &bz)).collect::<Result<_>>()?;
            forced.push(a);
            conds = conditions_for(g, &fx, &x);
        }
        if conds.iter().any(Expr::is_constant) {
            feasible = false;
        }
        let mut rows: Vec<Vec<Expr>> = fx.iter().map(|f| f.coords.clone()).collect();
        rows.push(x.coords.clone());
        if maximal_minors(&rows).iter().all(Expr::is_zero) {
            feasible = false;
        }

        // Simplify with moves that fix every fixed generator.
        let mut moves = Vec::new();
        if feasible {
            for m in &mats {
                if fx.iter().any(|f| m.apply(f) != *f) {
                    continue;
                }
                for k in (0..n).rev() {
                    if k == top || x.coords[k].is_zero() {
                        continue;
                    }
                    let Some((c0, c1)) = affine_coordinate(m, &x, k) else { continue };
                    let Some(c1) = c1.as_constant() else { continue };
                    let eps = c0.scale(&(-c1.recip()));
                    if eps.contains_where(|a| matches!(a, Atom::Exp(_) | Atom::Jet(_))) {
                        continue;
                    }
                    let next = m.at(&eps)?.apply(&x);
                    let zs = zero_set(&x);
                    let nz = zero_set(&next);
                    if zs.is_subset(&nz) && nz.len() > zs.len() && next.coords[top] == x.coords[top] {
                        moves.push((m.generator, eps));
                        x = next;
                    }
                }
            }
        }
        cases.push(ExtensionCase {
            top,
            fixed: fx,
            forced,
            conditions: conds,
            moves,
            candidate: x,
            feasible,
        });
    }
    Ok(ExtensionConditions {
        fixed: fixed.to_vec(),
        unknowns,
        generic,
        constraints,
        cases,
    })
}

/// All `x` with `[x1, x]` in `span{x1, x}`: the 3-minors of
/// `[x1; x; [x1, x]]`, split by the highest nonzero coordinate of `x`.
pub fn solve_pair_condition(g: &LieAlgebra, x1: &AlgebraVector) -> Result<ExtensionConditions> {
    if x1.is_zero() {
        return Err(Error::validation("first generator is zero"));
    }
    extend(g, std::slice::from_ref(x1))
}

/// Extensions `Y` of a 2-dimensional subalgebra `{y1, y2}` to a
/// 3-dimensional one.
pub fn solve_triple_condition(g: &LieAlgebra, y1: &AlgebraVector, y2: &AlgebraVector) -> Result<ExtensionConditions> {
    let check = is_subalgebra(g, &[y1.clone(), y2.clone()]);
    if check.verdict == Verdict::NotClosed || !check.generically_independent() {
        return Err(Error::validation(format!(
            "⟨{}, {}⟩ is not a 2-dimensional subalgebra",
            y1.display_with(g.labels()),
            y2.display_with(g.labels())
        )));
    }
    extend(g, &[y1.clone(), y2.clone()])
}

/// Whether an atom is one of the extension unknowns `a_i`.
pub fn is_extension_unknown(a: &Atom) -> bool {
    matches!(a, Atom::Symbol(s) if s.kind() == SymbolKind::AnsatzUnknown)
}
