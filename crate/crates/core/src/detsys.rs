//! Determining equations for point symmetries, exact verification of
//! candidate generators, and the polynomial-ansatz solver.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::expr::{Atom, Expr, Monomial, Symbol, SymbolKind};
use crate::jet::{JetCoordinate, JetSpace, MultiIndex};
use crate::linalg::{self, FractionFreeEliminator};
use crate::vfield::{prolong, VectorField};
use crate::{Error, Rational, Result};

/// Ansatz solver refuses systems with more unknowns than this.
pub const MAX_ANSATZ_UNKNOWNS: usize = 5000;

const MAX_CLOSURE_PASSES: usize = 32;

/// A system as written: each equation means `expr = 0`, polynomial, with
/// denominators already cleared.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSystem {
    pub space: JetSpace,
    pub parameters: Vec<Symbol>,
    pub nonzero: BTreeSet<Symbol>,
    pub equations: Vec<Expr>,
}

/// `coeff * lead = rhs`, with `coeff` a monomial in nonzero parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedForm {
    pub coeff: Expr,
    pub lead: JetCoordinate,
    pub rhs: Expr,
}

impl SolvedForm {
    /// `R = sum_k R_k lead^k  ->  sum_k R_k rhs^k coeff^(m-k)`.
    fn eliminate(&self, e: &Expr) -> Expr {
        let atom = Atom::Jet(self.lead.clone());
        let powers = e.powers_of(&atom);
        let Some(&m) = powers.keys().next_back() else {
            return Expr::zero();
        };
        if m == 0 {
            return e.clone();
        }
        let mut out = Expr::zero();
        for (k, rk) in powers {
            out += rk * self.rhs.pow(k) * self.coeff.pow(m - k);
        }
        out
    }

    /// Multiplier picked up by [`Self::eliminate`] on `e`.
    fn factor_for(&self, e: &Expr) -> Expr {
        self.coeff.pow(e.degree_in(&Atom::Jet(self.lead.clone())))
    }
}

/// A system together with its solved forms, closed under total
/// derivatives up to `order` and triangular: no right side contains a lead.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeSystem {
    pub raw: RawSystem,
    pub leading: Vec<JetCoordinate>,
    pub rules: Vec<SolvedForm>,
    pub order: u32,
}

fn max_jet_order(e: &Expr) -> u32 {
    e.atoms()
        .iter()
        .filter_map(|a| a.as_jet().filter(|j| j.dependent.kind() == SymbolKind::Dependent).map(|j| j.order()))
        .max()
        .unwrap_or(0)
}

fn is_parameter_monomial(c: &Expr, nonzero: &BTreeSet<Symbol>) -> bool {
    c.len() == 1
        && c.atoms().iter().all(|a| match a {
            Atom::Symbol(s) => s.kind() == SymbolKind::Parameter && nonzero.contains(s),
            _ => false,
        })
}

fn related(a: &JetCoordinate, b: &JetCoordinate) -> bool {
    a == b || a.is_derivative_of(b) || b.is_derivative_of(a)
}

/// The default choice: highest total order first, ties broken by the
/// earliest dependent in declaration order, then by multi-index. A candidate
/// must appear linearly with a parameter-monomial coefficient and must not
/// be related by differentiation to an earlier lead.
fn choose_lead(raw: &RawSystem, e: &Expr, taken: &[JetCoordinate]) -> Option<JetCoordinate> {
    let deps = raw.space.dependents();
    let mut cands: Vec<JetCoordinate> = e
        .atoms()
        .into_iter()
        .filter_map(|a| a.as_jet().cloned())
        .filter(|j| j.dependent.kind() == SymbolKind::Dependent && j.order() > 0)
        .collect();
    let pos = |j: &JetCoordinate| deps.iter().position(|d| *d == j.dependent).unwrap_or(usize::MAX);
    cands.sort_by(|a, b| {
        b.order()
            .cmp(&a.order())
            .then(pos(a).cmp(&pos(b)))
            .then(a.index.cmp(&b.index))
    });
    cands
        .into_iter()
        .find(|j| admissible(raw, e, j).is_ok() && !taken.iter().any(|t| related(t, j)))
}

fn admissible(raw: &RawSystem, e: &Expr, lead: &JetCoordinate) -> Result<(Expr, Expr)> {
    let atom = Atom::Jet(lead.clone());
    let powers = e.powers_of(&atom);
    if powers.keys().any(|&k| k > 1) || !powers.contains_key(&1) {
        return Err(Error::validation(format!("{lead} does not appear linearly")));
    }
    let mut coeff = powers[&1].clone();
    let mut rhs = -powers.get(&0).cloned().unwrap_or_default();
    if coeff.terms().next().is_some_and(|(_, c)| c < &Rational::zero()) {
        coeff = -coeff;
        rhs = -rhs;
    }
    if !is_parameter_monomial(&coeff, &raw.nonzero) {
        return Err(Error::validation(format!(
            "coefficient {coeff} of {lead} is not a monomial in nonzero parameters"
        )));
    }
    Ok((coeff, rhs))
}

/// Builds solved forms for `raw`, closed to the system's own order.
pub fn solved_forms(raw: &RawSystem, leading: &[Option<JetCoordinate>]) -> Result<PdeSystem> {
    let order = raw.equations.iter().map(max_jet_order).max().unwrap_or(0);
    solved_forms_to_order(raw, leading, order)
}

/// As [`solved_forms`], with the closure carried to `order`.
pub fn solved_forms_to_order(
    raw: &RawSystem,
    leading: &[Option<JetCoordinate>],
    order: u32,
) -> Result<PdeSystem> {
    let mut leads: Vec<JetCoordinate> = Vec::new();
    let mut base = Vec::new();
    for (i, e) in raw.equations.iter().enumerate() {
        let lead = match leading.get(i).cloned().flatten() {
            Some(l) => {
                if leads.iter().any(|t| related(t, &l)) {
                    return Err(Error::validation(format!(
                        "equation {}: leading {l} overlaps an earlier leading derivative",
                        i + 1
                    )));
                }
                l
            }
            None => choose_lead(raw, e, &leads).ok_or_else(|| {
                Error::validation(format!(
                    "equation {} ({e} = 0) has no admissible leading derivative",
                    i + 1
                ))
            })?,
        };
        let (coeff, rhs) = admissible(raw, e, &lead)
            .map_err(|err| Error::validation(format!("equation {}: {err}", i + 1)))?;
        leads.push(lead.clone());
        base.push(SolvedForm { coeff, lead, rhs });
    }

    // Prolonged rules D_K(coeff * lead) = D_K rhs.
    let mut rules: Vec<SolvedForm> = Vec::new();
    let mut seen: BTreeSet<JetCoordinate> = BTreeSet::new();
    for b in &base {
        for k in 0..=order.saturating_sub(b.lead.order()) {
            for idx in MultiIndex::all_of_order(raw.space.independents(), k) {
                let lead = b.lead.derive_multi(&idx);
                if !seen.insert(lead.clone()) {
                    continue;
                }
                let rhs = raw.space.total_derivative_multi(&b.rhs, &idx)?;
                rules.push(SolvedForm {
                    coeff: b.coeff.clone(),
                    lead,
                    rhs,
                });
            }
        }
    }
    triangularize(&mut rules)?;
    Ok(PdeSystem {
        raw: raw.clone(),
        leading: leads,
        rules,
        order,
    })
}

fn triangularize(rules: &mut [SolvedForm]) -> Result<()> {
    let leads: BTreeSet<Atom> = rules.iter().map(|r| Atom::Jet(r.lead.clone())).collect();
    for _ in 0..MAX_CLOSURE_PASSES {
        let mut changed = false;
        for i in 0..rules.len() {
            for j in 0..rules.len() {
                if i == j || !rules[i].rhs.contains_atom(&Atom::Jet(rules[j].lead.clone())) {
                    continue;
                }
                let factor = rules[j].factor_for(&rules[i].rhs);
                let rhs = rules[j].eliminate(&rules[i].rhs);
                rules[i].coeff = &rules[i].coeff * &factor;
                rules[i].rhs = rhs;
                changed = true;
            }
            if rules[i].rhs.contains_atom(&Atom::Jet(rules[i].lead.clone())) {
                return Err(Error::Closure(format!(
                    "solved form for {} feeds back into itself",
                    rules[i].lead
                )));
            }
        }
        if !changed {
            return Ok(());
        }
    }
    let stuck: Vec<String> = rules
        .iter()
        .filter(|r| r.rhs.atoms().iter().any(|a| leads.contains(a)))
        .map(|r| r.lead.to_string())
        .collect();
    Err(Error::Closure(format!(
        "substitution did not terminate for {}",
        stuck.join(", ")
    )))
}

impl PdeSystem {
    pub fn space(&self) -> &JetSpace {
        &self.raw.space
    }

    pub fn equations(&self) -> &[Expr] {
        &self.raw.equations
    }

    /// Rewrites every lead (and closed derivative of a lead) by its solved
    /// form. The result equals `e` times a nonzero parameter monomial on the
    /// solution manifold.
    pub fn reduce(&self, e: &Expr) -> Expr {
        let mut out = e.clone();
        for r in &self.rules {
            out = r.eliminate(&out);
        }
        out
    }

    fn rule_for(&self, j: &JetCoordinate) -> Option<&SolvedForm> {
        self.rules.iter().find(|r| r.lead == *j)
    }
}

/// Coordinates of a generic generator: `xi1, xi2, ..., eta1, ...`, each an
/// unknown function of all base coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericAnsatz {
    pub functions: Vec<(Symbol, Symbol)>,
    pub field: VectorField,
}

impl GenericAnsatz {
    pub fn new(space: &JetSpace) -> Self {
        let mut functions = Vec::new();
        for (i, x) in space.independents().iter().enumerate() {
            functions.push((x.clone(), Symbol::function(&format!("xi{}", i + 1))));
        }
        for (i, u) in space.dependents().iter().enumerate() {
            functions.push((u.clone(), Symbol::function(&format!("eta{}", i + 1))));
        }
        let mut field = VectorField::zero();
        for (z, f) in &functions {
            field.set(z, Expr::symbol(f));
        }
        GenericAnsatz { functions, field }
    }

    pub fn function_for(&self, z: &Symbol) -> Option<&Symbol> {
        self.functions.iter().find(|(c, _)| c == z).map(|(_, f)| f)
    }

    /// Replaces every `f_J` by `d_J` of the matching coefficient of `v`.
    pub fn evaluate_on(&self, e: &Expr, v: &VectorField) -> Result<Expr> {
        let mut bindings: BTreeMap<Atom, Expr> = BTreeMap::new();
        for atom in e.atoms() {
            let Atom::Jet(j) = &atom else { continue };
            if j.dependent.kind() != SymbolKind::Function {
                continue;
            }
            let (coord, _) = self
                .functions
                .iter()
                .find(|(_, f)| *f == j.dependent)
                .ok_or_else(|| Error::validation(format!("{} is not an ansatz function", j.dependent)))?;
            let mut d = v.component(coord);
            for var in j.index.vars() {
                d = d.partial(&Atom::from(&var));
            }
            bindings.insert(atom.clone(), d);
        }
        e.substitute_unchecked(&bindings)
    }
}

/// Where a determining equation came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminingSource {
    pub equation: usize,
    pub jet_monomial: Monomial,
}

/// Equations linear and homogeneous in the unknowns (ansatz constants or
/// unknown functions).
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminingSystem {
    pub unknowns: Vec<Symbol>,
    pub equations: Vec<Expr>,
    pub sources: Vec<DeterminingSource>,
}

impl DeterminingSystem {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }
}

fn is_unknown(a: &Atom) -> bool {
    match a {
        Atom::Symbol(s) => s.kind() == SymbolKind::AnsatzUnknown,
        Atom::Jet(j) => j.dependent.kind() == SymbolKind::Function,
        Atom::Exp(_) => false,
    }
}

fn unknown_symbol(a: &Atom) -> Option<Symbol> {
    match a {
        Atom::Symbol(s) if s.kind() == SymbolKind::AnsatzUnknown => Some(s.clone()),
        Atom::Jet(j) if j.dependent.kind() == SymbolKind::Function => Some(j.dependent.clone()),
        _ => None,
    }
}

/// `pr^(n) v (E)` reduced modulo the solved forms and split over monomials
/// in the derivative jets. Duplicates (after making each equation primitive)
/// are dropped.
pub fn invariance_condition(system: &PdeSystem, v: &VectorField) -> Result<DeterminingSystem> {
    let pr = prolong(system.space(), v, system.order.max(1))?;
    let mut seen: BTreeSet<Expr> = BTreeSet::new();
    let mut out = DeterminingSystem {
        unknowns: Vec::new(),
        equations: Vec::new(),
        sources: Vec::new(),
    };
    let mut unknowns: BTreeSet<Symbol> = BTreeSet::new();
    for (i, e) in system.equations().iter().enumerate() {
        let cond = system.reduce(&pr.apply(e)?);
        for (m, coeff) in cond.collect_where(Atom::is_derivative_jet) {
            let p = coeff.primitive();
            if !seen.insert(p.clone()) {
                continue;
            }
            for a in p.atoms() {
                if let Some(s) = unknown_symbol(&a) {
                    unknowns.insert(s);
                }
                if is_unknown(&a) && p.degree_in(&a) > 1 {
                    return Err(Error::validation("invariance condition is nonlinear in the unknowns"));
                }
            }
            out.equations.push(p);
            out.sources.push(DeterminingSource {
                equation: i,
                jet_monomial: m,
            });
        }
    }
    out.unknowns = unknowns.into_iter().collect();
    Ok(out)
}

/// Residuals of `pr^(n) v (E)` modulo the solved forms, one per equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub residuals: Vec<Expr>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(Expr::is_zero)
    }
}

pub fn verify_symmetry(system: &PdeSystem, v: &VectorField) -> Result<Verification> {
    let pr = prolong(system.space(), v, system.order.max(1))?;
    let residuals = system
        .equations()
        .iter()
        .map(|e| Ok(system.reduce(&pr.apply(e)?)))
        .collect::<Result<_>>()?;
    Ok(Verification { residuals })
}

pub const DEFAULT_ORACLE_SEED: u64 = 0x5eed_0f_1e5;

/// Independent numeric check with the default seed.
pub fn numeric_point_oracle(system: &PdeSystem, v: &VectorField, trials: usize) -> Result<bool> {
    numeric_point_oracle_seeded(system, v, trials, DEFAULT_ORACLE_SEED)
}

fn random_rational(rng: &mut StdRng, nonzero: bool) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-40..=40);
        let d: i64 = rng.gen_range(1..=13);
        if !nonzero || n != 0 {
            return Rational::new(n.into(), d.into());
        }
    }
}

/// Samples random rational points on the solution manifold: base
/// coordinates, parameters (nonzero) and parametric jets are random; leads
/// are computed from the solved forms. The unreduced condition
/// `pr^(n) v (E)` must vanish exactly at every sample.
pub fn numeric_point_oracle_seeded(
    system: &PdeSystem,
    v: &VectorField,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    if trials == 0 {
        return Err(Error::validation("oracle needs at least one trial"));
    }
    let space = system.space();
    let order = system.order.max(1);
    let pr = prolong(space, v, order)?;
    let conditions: Vec<Expr> = system
        .equations()
        .iter()
        .map(|e| pr.apply(e))
        .collect::<Result<_>>()?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut free: Vec<Atom> = space.base_coordinates().iter().map(Atom::from).collect();
    free.extend(
        space
            .jet_coordinates(order)
            .into_iter()
            .filter(|j| system.rule_for(j).is_none())
            .map(Atom::Jet),
    );
    let mut params: BTreeSet<Symbol> = system.raw.parameters.iter().cloned().collect();
    for c in conditions.iter().chain(v.components().map(|(_, c)| c)) {
        for a in c.atoms() {
            if let Atom::Symbol(s) = a {
                if s.kind() == SymbolKind::Parameter {
                    params.insert(s);
                }
            }
        }
    }
    for _ in 0..trials {
        let mut point: BTreeMap<Atom, Rational> = BTreeMap::new();
        for a in &free {
            point.insert(a.clone(), random_rational(&mut rng, false));
        }
        for p in &params {
            point.insert(Atom::from(p), random_rational(&mut rng, true));
        }
        for r in &system.rules {
            let num = r.rhs.eval(|a| point.get(a).cloned())?;
            let den = r.coeff.eval(|a| point.get(a).cloned())?;
            point.insert(Atom::Jet(r.lead.clone()), num / den);
        }
        for c in &conditions {
            if !c.eval(|a| point.get(a).cloned())?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Complete polynomials of degree `<= d` in the base coordinates, one
/// unknown constant per (coordinate, monomial).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialAnsatz {
    pub degree: u32,
    pub field: VectorField,
    pub columns: Vec<(Symbol, Symbol, Monomial)>,
}

pub fn base_monomials(space: &JetSpace, d: u32) -> Vec<Monomial> {
    let base = space.base_coordinates();
    (0..=d)
        .flat_map(|k| MultiIndex::all_of_order(&base, k))
        .map(|idx| Monomial::from_factors(idx.counts().iter().map(|(s, c)| (Atom::from(s), *c))))
        .collect()
}

impl PolynomialAnsatz {
    pub fn new(space: &JetSpace, d: u32) -> Result<Self> {
        let monos = base_monomials(space, d);
        let base = space.base_coordinates();
        let n = monos.len() * base.len();
        if n > MAX_ANSATZ_UNKNOWNS {
            return Err(Error::Capacity(format!(
                "degree {d} ansatz needs {n} unknowns, above the limit {MAX_ANSATZ_UNKNOWNS}"
            )));
        }
        let width = n.to_string().len().max(4);
        let mut field = VectorField::zero();
        let mut columns = Vec::with_capacity(n);
        for z in &base {
            let mut coeff = Expr::zero();
            for m in &monos {
                let c = Symbol::unknown(&format!("c{:0width$}", columns.len()));
                coeff += Expr::symbol(&c).mul_monomial(m, &Rational::one());
                columns.push((c, z.clone(), m.clone()));
            }
            field.set(z, coeff);
        }
        Ok(PolynomialAnsatz {
            degree: d,
            field,
            columns,
        })
    }

    fn index(&self) -> BTreeMap<Symbol, usize> {
        self.columns.iter().enumerate().map(|(i, (c, _, _))| (c.clone(), i)).collect()
    }

    fn to_field(&self, v: &[Rational]) -> VectorField {
        let mut out = VectorField::zero();
        for ((_, z, m), c) in self.columns.iter().zip(v) {
            if c.is_zero() {
                continue;
            }
            let s = out.component(z) + Expr::term(m.clone(), c.clone());
            out.set(z, s);
        }
        out
    }
}

/// Splits equations linear in the ansatz constants over every other atom,
/// returning sparse rows indexed by ansatz column.
fn linear_rows(
    eqs: &[Expr],
    index: &BTreeMap<Symbol, usize>,
) -> Result<Vec<Vec<(usize, Rational)>>> {
    let mut rows = Vec::new();
    for e in eqs {
        for (_, lin) in e.collect_where(|a| !matches!(a, Atom::Symbol(s) if s.kind() == SymbolKind::AnsatzUnknown)) {
            let mut row = Vec::with_capacity(lin.len());
            for (m, c) in lin.terms() {
                let f = m.factors();
                match f {
                    [(Atom::Symbol(s), 1)] if index.contains_key(s) => row.push((index[s], c.clone())),
                    _ => return Err(Error::validation(format!("term {m} is not linear in the ansatz constants"))),
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Counts reported with a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStats {
    pub generic_equations: usize,
    pub linear_equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub nullity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBasis {
    pub fields: Vec<VectorField>,
    pub ansatz_degree: u32,
    pub stats: SolveStats,
}

/// Generic determining system in unknown-function form.
pub fn generic_determining_system(system: &PdeSystem) -> Result<(GenericAnsatz, DeterminingSystem)> {
    let ansatz = GenericAnsatz::new(system.space());
    let det = invariance_condition(system, &ansatz.field)?;
    Ok((ansatz, det))
}

/// Solves the determining system with a complete polynomial ansatz of
/// degree `d`. The basis is in reduced echelon form with columns ordered by
/// coordinate, then by ascending monomial degree.
pub fn solve_determining(system: &PdeSystem, d: u32) -> Result<SymmetryBasis> {
    let (generic, det) = generic_determining_system(system)?;
    solve_with_generic(&generic, &det, system, d)
}

fn solve_with_generic(
    generic: &GenericAnsatz,
    det: &DeterminingSystem,
    system: &PdeSystem,
    d: u32,
) -> Result<SymmetryBasis> {
    let ansatz = PolynomialAnsatz::new(system.space(), d)?;
    let substituted = det
        .equations
        .iter()
        .map(|e| generic.evaluate_on(e, &ansatz.field))
        .collect::<Result<Vec<_>>>()?;
    let rows = linear_rows(&substituted, &ansatz.index())?;
    let mut elim = FractionFreeEliminator::new(ansatz.columns.len());
    for r in &rows {
        elim.push(r);
    }
    let null = elim.nullspace();
    let ech = linalg::rref(&null);
    let fields: Vec<VectorField> = ech.rows.iter().map(|v| ansatz.to_field(v)).collect();
    Ok(SymmetryBasis {
        stats: SolveStats {
            generic_equations: det.len(),
            linear_equations: rows.len(),
            unknowns: ansatz.columns.len(),
            rank: elim.rank(),
            nullity: fields.len(),
        },
        fields,
        ansatz_degree: d,
    })
}

/// Solves at `d` and `d + 1` and reports whether the spans agree.
pub fn solve_with_stability(system: &PdeSystem, d: u32) -> Result<(SymmetryBasis, SymmetryBasis, bool)> {
    let (generic, det) = generic_determining_system(system)?;
    let lo = solve_with_generic(&generic, &det, system, d)?;
    let hi = solve_with_generic(&generic, &det, system, d + 1)?;
    let same = same_span(&lo.fields, &hi.fields);
    Ok((lo, hi, same))
}

/// Coefficient vectors over the union of (coordinate, monomial) columns.
/// Parameters inside coefficients are treated as independent transcendentals.
pub fn coefficient_matrix(fields: &[VectorField]) -> (Vec<(Symbol, Monomial)>, linalg::Matrix) {
    let mut cols: BTreeSet<(Symbol, Monomial)> = BTreeSet::new();
    for f in fields {
        for (z, c) in f.components() {
            for (m, _) in c.terms() {
                cols.insert((z.clone(), m.clone()));
            }
        }
    }
    let cols: Vec<_> = cols.into_iter().collect();
    let pos: BTreeMap<&(Symbol, Monomial), usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows = fields
        .iter()
        .map(|f| {
            let mut row = vec![Rational::zero(); cols.len()];
            for (z, c) in f.components() {
                for (m, k) in c.terms() {
                    row[pos[&(z.clone(), m.clone())]] = k.clone();
                }
            }
            row
        })
        .collect();
    (cols, rows)
}

pub fn span_rank(fields: &[VectorField]) -> usize {
    let (_, m) = coefficient_matrix(fields);
    linalg::rank(&m)
}

pub fn same_span(a: &[VectorField], b: &[VectorField]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    let both: Vec<VectorField> = a.iter().chain(b).cloned().collect();
    ra == rb && span_rank(&both) == ra
}

/// Coordinates of `v` in the basis `fields`, if it lies in their span.
pub fn coordinates_in(fields: &[VectorField], v: &VectorField) -> Option<Vec<Rational>> {
    let mut all = fields.to_vec();
    all.push(v.clone());
    let (_, m) = coefficient_matrix(&all);
    let (target, basis) = m.split_last().expect("nonempty");
    linalg::solve_in_span(basis, target)
}

#[cfg(test)]
mod tests;
