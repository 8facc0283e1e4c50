//! Infinitesimal generators on the space of independent and dependent
//! variables, their prolongations, brackets, flows and invariants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::expr::{Atom, Expr, Symbol, SymbolKind};
use crate::jet::{JetCoordinate, JetSpace, MultiIndex};
use crate::{Error, Rational, Result};

/// `v = sum xi_i d/dx_i + sum phi_a d/du_a`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    xi: BTreeMap<Symbol, Expr>,
    phi: BTreeMap<Symbol, Expr>,
}

impl VectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `d/dz` for a base coordinate `z`.
    pub fn translation(z: &Symbol) -> Self {
        Self::zero().with(z, Expr::one())
    }

    /// Sets the coefficient of `d/dz`; `z` must be independent or dependent.
    pub fn with(mut self, z: &Symbol, coeff: Expr) -> Self {
        self.set(z, coeff);
        self
    }

    pub fn set(&mut self, z: &Symbol, coeff: Expr) {
        let map = match z.kind() {
            SymbolKind::Independent => &mut self.xi,
            SymbolKind::Dependent => &mut self.phi,
            k => panic!("{z} is a {k:?}, not a base coordinate"),
        };
        if coeff.is_zero() {
            map.remove(z);
        } else {
            map.insert(z.clone(), coeff);
        }
    }

    pub fn xi(&self) -> &BTreeMap<Symbol, Expr> {
        &self.xi
    }

    pub fn phi(&self) -> &BTreeMap<Symbol, Expr> {
        &self.phi
    }

    pub fn component(&self, z: &Symbol) -> Expr {
        self.xi
            .get(z)
            .or_else(|| self.phi.get(z))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero components, independents first.
    pub fn components(&self) -> impl Iterator<Item = (&Symbol, &Expr)> {
        self.xi.iter().chain(self.phi.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_empty() && self.phi.is_empty()
    }

    /// Coefficients may hold base variables, parameters, unknowns and
    /// unknown functions, but no derivative jets.
    pub fn is_point_field(&self) -> bool {
        self.components().all(|(_, c)| {
            !c.contains_where(|a| matches!(a, Atom::Jet(j) if j.order() > 0 && j.dependent.kind() == SymbolKind::Dependent) || matches!(a, Atom::Exp(_)))
        })
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (z, c) in other.components() {
            let s = out.component(z) + c;
            out.set(z, s);
        }
        out
    }

    pub fn scale(&self, k: &Expr) -> VectorField {
        let mut out = VectorField::zero();
        for (z, c) in self.components() {
            out.set(z, c * k);
        }
        out
    }

    pub fn scale_rational(&self, k: &Rational) -> VectorField {
        self.scale(&Expr::constant(k.clone()))
    }

    /// Applies an expression map to every coefficient.
    pub fn map(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<VectorField> {
        let mut out = VectorField::zero();
        for (z, c) in self.components() {
            out.set(z, f(c)?);
        }
        Ok(out)
    }

    /// `v(f)` on functions of the base coordinates. Unknown functions are
    /// differentiated by the chain rule.
    pub fn derivation(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (z, c) in self.components() {
            out += c * f.partial(&Atom::from(z));
        }
        // f_J for an unknown function: v(f_J) = sum v_z f_{J+z}
        for atom in f.atoms() {
            if let Atom::Jet(j) = &atom {
                if j.dependent.kind() == SymbolKind::Function {
                    let df = f.partial(&atom);
                    for (z, c) in self.components() {
                        out += &df * c * Expr::atom(j.derive(z));
                    }
                }
            }
        }
        out
    }

    /// Rendering such as `T ∂_T` or `∂_x + ∂_y`, in the space's coordinate order.
    pub fn display_in(&self, space: &JetSpace) -> String {
        self.render(space, |z| format!("∂_{z}"), " ")
    }

    /// DSL syntax: `T * d/dT`.
    pub fn to_dsl(&self, space: &JetSpace) -> String {
        self.render(space, |z| format!("d/d{z}"), " * ")
    }

    fn render(&self, space: &JetSpace, basis: impl Fn(&Symbol) -> String, join: &str) -> String {
        let order: Vec<Symbol> = {
            let mut o = space.base_coordinates();
            for (z, _) in self.components() {
                if !o.contains(z) {
                    o.push(z.clone());
                }
            }
            o
        };
        let mut out = String::new();
        for z in order {
            let c = self.component(&z);
            if c.is_zero() {
                continue;
            }
            let (neg, body) = match c.as_constant() {
                Some(k) if k.abs().is_one() => (k.is_negative(), basis(&z)),
                Some(k) => (k.is_negative(), format!("{}{join}{}", k.abs(), basis(&z))),
                None if c.len() == 1 => {
                    let (_, k) = c.terms().next().expect("one term");
                    let neg = k.is_negative();
                    let mag = if neg { -&c } else { c.clone() };
                    (neg, format!("{mag}{join}{}", basis(&z)))
                }
                None => (false, format!("({c}){join}{}", basis(&z))),
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = JetSpace::new(self.xi.keys().cloned().collect(), self.phi.keys().cloned().collect())
            .expect("field coordinates are classified by kind");
        f.write_str(&self.display_in(&space))
    }
}

/// `Q^a = phi_a - sum_i xi_i u^a_i`.
pub fn characteristic(space: &JetSpace, v: &VectorField) -> BTreeMap<Symbol, Expr> {
    space
        .dependents()
        .iter()
        .map(|u| {
            let mut q = v.component(u);
            for x in space.independents() {
                let xi = v.component(x);
                if !xi.is_zero() {
                    q -= &(xi * Expr::atom(JetCoordinate::of(u, &[x])));
                }
            }
            (u.clone(), q)
        })
        .collect()
}

/// `v^(n)`: the base field plus a coefficient for every jet of order `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub order: u32,
    pub jet_coeffs: BTreeMap<JetCoordinate, Expr>,
}

/// Prolongs with `phi^J_a = D_J Q^a + sum_i xi_i u^a_{J,i}`.
pub fn prolong(space: &JetSpace, v: &VectorField, n: u32) -> Result<ProlongedField> {
    if n == 0 {
        return Err(Error::validation("prolongation order must be at least 1"));
    }
    let q = characteristic(space, v);
    let xs = space.independents();
    let mut jet_coeffs = BTreeMap::new();
    for u in space.dependents() {
        // D_J Q, built from D_{J - x} Q one order at a time.
        let mut dq: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        dq.insert(MultiIndex::zero(), q[u].clone());
        for k in 1..=n {
            for idx in MultiIndex::all_of_order(xs, k) {
                let first = idx.counts()[0].0.clone();
                let parent = idx
                    .checked_sub(&MultiIndex::from_vars([&first]))
                    .expect("parent index");
                let d = space.total_derivative(&dq[&parent], &first)?;
                let mut coeff = d.clone();
                for x in xs {
                    let xi = v.component(x);
                    if !xi.is_zero() {
                        let jet = JetCoordinate::new(u.clone(), idx.increment(x));
                        coeff += xi * Expr::atom(jet);
                    }
                }
                jet_coeffs.insert(JetCoordinate::new(u.clone(), idx.clone()), coeff);
                dq.insert(idx, d);
            }
        }
    }
    Ok(ProlongedField {
        base: v.clone(),
        order: n,
        jet_coeffs,
    })
}

impl ProlongedField {
    /// The directional derivative of `e` along the prolonged field.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for atom in e.atoms() {
            let coeff = match &atom {
                Atom::Symbol(s) if s.kind() == SymbolKind::Independent => self.base.component(s),
                Atom::Jet(j) if j.dependent.kind() == SymbolKind::Dependent => {
                    if j.order() == 0 {
                        self.base.component(&j.dependent)
                    } else if j.order() > self.order {
                        return Err(Error::validation(format!(
                            "{j} has order {} above the prolongation order {}",
                            j.order(),
                            self.order
                        )));
                    } else {
                        self.jet_coeffs.get(j).cloned().unwrap_or_default()
                    }
                }
                _ => Expr::zero(),
            };
            if !coeff.is_zero() {
                out += coeff * e.partial(&atom);
            }
        }
        Ok(out)
    }
}

/// Coefficient-wise `[v, w] = v(w) - w(v)`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> VectorField {
    let mut out = VectorField::zero();
    let coords: std::collections::BTreeSet<Symbol> =
        v.components().chain(w.components()).map(|(z, _)| z.clone()).collect();
    for z in coords {
        let c = v.derivation(&w.component(&z)) - w.derivation(&v.component(&z));
        out.set(&z, c);
    }
    out
}

/// A one-parameter family of point maps, one image per base coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMap {
    pub parameter: Symbol,
    pub images: Vec<(Symbol, Expr)>,
}

impl PointMap {
    pub fn image(&self, z: &Symbol) -> Expr {
        self.images
            .iter()
            .find(|(s, _)| s == z)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(|| Expr::symbol(z))
    }

    /// Replaces the group parameter by `value` (any expression in other
    /// group parameters, or zero).
    pub fn at(&self, value: &Expr) -> Result<PointMap> {
        let images = self
            .images
            .iter()
            .map(|(z, e)| Ok((z.clone(), e.subs(self.parameter.clone(), value)?)))
            .collect::<Result<_>>()?;
        Ok(PointMap {
            parameter: self.parameter.clone(),
            images,
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PointMap) -> Result<PointMap> {
        let bindings: BTreeMap<Atom, Expr> = other
            .images
            .iter()
            .map(|(z, e)| (Atom::from(z), e.clone()))
            .collect();
        let images = self
            .images
            .iter()
            .map(|(z, e)| Ok((z.clone(), e.substitute_unchecked(&bindings)?)))
            .collect::<Result<_>>()?;
        Ok(PointMap {
            parameter: self.parameter.clone(),
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(z, e)| *e == Expr::symbol(z))
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (_, e)) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// `coeff = shift + rate * z` with `rate` rational and `shift` free of
/// base coordinates.
struct Affine {
    shift: Expr,
    rate: Rational,
}

fn decoupled_affine(space: &JetSpace, v: &VectorField) -> Result<Vec<(Symbol, Affine)>> {
    if !v.is_point_field() {
        return Err(Error::unsupported("field has derivative or exponential atoms"));
    }
    let base = space.base_coordinates();
    let mut out = Vec::new();
    for z in &base {
        let c = v.component(z);
        let za = Atom::from(z);
        let foreign = c.atoms().into_iter().find(|a| {
            *a != za
                && match a {
                    Atom::Symbol(s) => s.kind() != SymbolKind::Parameter,
                    _ => true,
                }
        });
        if let Some(a) = foreign {
            return Err(Error::unsupported(format!(
                "coefficient of d/d{z} depends on {a}; only decoupled affine fields have closed-form flows"
            )));
        }
        let powers = c.powers_of(&za);
        if powers.keys().any(|&k| k > 1) {
            return Err(Error::unsupported(format!("coefficient of d/d{z} is nonlinear in {z}")));
        }
        let rate = match powers.get(&1) {
            None => Rational::zero(),
            Some(r) => r.as_constant().ok_or_else(|| {
                Error::unsupported(format!("scaling rate of {z} is not a rational constant"))
            })?,
        };
        out.push((
            z.clone(),
            Affine {
                shift: powers.get(&0).cloned().unwrap_or_default(),
                rate,
            },
        ));
    }
    Ok(out)
}

/// The exact flow of a decoupled affine field.
///
/// Each coordinate solves `dz/deps = shift + rate * z`: a translation
/// `z + shift*eps` when `rate = 0`, otherwise
/// `z*e^(rate*eps) + (shift/rate)*(e^(rate*eps) - 1)`.
pub fn flow(space: &JetSpace, v: &VectorField, eps: &Symbol) -> Result<PointMap> {
    if eps.kind() != SymbolKind::GroupParameter {
        return Err(Error::validation(format!("{eps} is not a group parameter")));
    }
    let parts = decoupled_affine(space, v)?;
    let e = Expr::symbol(eps);
    let images = parts
        .into_iter()
        .map(|(z, aff)| {
            let zx = Expr::symbol(&z);
            let img = if aff.rate.is_zero() {
                zx + aff.shift * &e
            } else {
                let ex = Expr::exp(aff.rate.clone(), eps);
                let k = aff.shift.scale(&aff.rate.recip());
                &zx * &ex + &k * &(&ex - &Expr::one())
            };
            (z, img)
        })
        .collect();
    Ok(PointMap {
        parameter: eps.clone(),
        images,
    })
}

/// `numerator / denominator * exp(exponent)`, a function of the base coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariant {
    pub numerator: Expr,
    pub denominator: Expr,
    pub exponent: Expr,
}

impl Invariant {
    pub fn polynomial(e: Expr) -> Self {
        Invariant {
            numerator: e,
            denominator: Expr::one(),
            exponent: Expr::zero(),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Expr> {
        (self.denominator.is_one() && self.exponent.is_zero()).then_some(&self.numerator)
    }

    /// Whether `v` annihilates the invariant:
    /// `v(N) D - N v(D) + N D v(L) = 0`.
    pub fn is_annihilated_by(&self, v: &VectorField) -> bool {
        let n = &self.numerator;
        let d = &self.denominator;
        let lhs = v.derivation(n) * d - n * v.derivation(d) + n * d * v.derivation(&self.exponent);
        lhs.is_zero()
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr| {
            if e.len() > 1 || e.terms().any(|(m, c)| !m.is_one() && !c.is_one()) {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        let mut s = if self.denominator.is_one() {
            self.numerator.to_string()
        } else {
            format!("{}/{}", wrap(&self.numerator), wrap(&self.denominator))
        };
        if !self.exponent.is_zero() {
            s = format!("{}*exp({})", wrap_if_sum(&s), self.exponent);
        }
        f.write_str(&s)
    }
}

fn wrap_if_sum(s: &str) -> String {
    if s.contains(" + ") || s.contains(" - ") {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// A functionally independent set of invariants of a decoupled affine
/// field, listed in coordinate order (one per coordinate other than the pivot).
pub fn invariants(space: &JetSpace, v: &VectorField) -> Result<Vec<Invariant>> {
    let parts = decoupled_affine(space, v)?;
    let active: Vec<usize> = (0..parts.len())
        .filter(|&i| !parts[i].1.shift.is_zero() || !parts[i].1.rate.is_zero())
        .collect();
    let translation_pivot = active.iter().copied().find(|&i| parts[i].1.rate.is_zero());
    let pivot = translation_pivot.or_else(|| active.first().copied());
    let mut out = Vec::new();
    for (i, (z, aff)) in parts.iter().enumerate() {
        let zx = Expr::symbol(z);
        if Some(i) == pivot {
            continue;
        }
        if !active.contains(&i) {
            out.push(Invariant::polynomial(zx));
            continue;
        }
        let (pz, paff) = &parts[pivot.expect("active coordinate implies pivot")];
        let px = Expr::symbol(pz);
        let inv = match (translation_pivot.is_some(), aff.rate.is_zero()) {
            // a_i z_p - a_p z_i
            (true, true) => Invariant::polynomial(&aff.shift * &px - &paff.shift * &zx),
            // (z + a/b) exp(-(b / a_p) z_p)
            (true, false) => {
                let ap = paff.shift.as_constant().ok_or_else(|| {
                    Error::unsupported(format!("translation rate of {pz} is not a rational constant"))
                })?;
                Invariant {
                    numerator: zx + aff.shift.scale(&aff.rate.recip()),
                    denominator: Expr::one(),
                    exponent: px.scale(&(-(&aff.rate / ap))),
                }
            }
            (false, _) => {
                let w_i = zx + aff.shift.scale(&aff.rate.recip());
                let w_p = px + paff.shift.scale(&paff.rate.recip());
                let r = &aff.rate / &paff.rate;
                let d = r.denom().to_u32_digits().1.first().copied().unwrap_or(1);
                let n = r.numer().magnitude().to_u32_digits().first().copied().unwrap_or(0);
                if r.is_negative() {
                    Invariant::polynomial(w_i.pow(d) * w_p.pow(n))
                } else {
                    Invariant {
                        numerator: w_i.pow(d),
                        denominator: w_p.pow(n),
                        exponent: Expr::zero(),
                    }
                }
            }
        };
        out.push(inv);
    }
    Ok(out)
}

/// One component `u = scale * f(args) + offset` of a symbolic solution.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionComponent {
    pub dependent: Symbol,
    pub function: String,
    pub args: Vec<Expr>,
    pub scale: Expr,
    pub offset: Expr,
}

impl fmt::Display for SolutionComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
        let call = format!("{}({})", self.function, args.join(", "));
        let mut s = if self.scale.is_one() {
            call
        } else if self.scale.len() == 1 && self.scale.as_constant().is_none_or(|c| c.is_positive()) {
            format!("{}*{call}", self.scale)
        } else {
            format!("({})*{call}", self.scale)
        };
        if !self.offset.is_zero() {
            let off = self.offset.to_string();
            match off.strip_prefix('-') {
                Some(rest) if self.offset.len() == 1 => s = format!("{s} - {rest}"),
                _ if self.offset.len() == 1 => s = format!("{s} + {off}"),
                _ => s = format!("{s} + ({off})"),
            }
        }
        write!(f, "{} = {s}", self.dependent)
    }
}

/// A tuple `u_a = f_a(x)` of symbolic solution functions.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionForm {
    pub components: Vec<SolutionComponent>,
}

impl SolutionForm {
    /// `u_a = names[a](x_1, ..., x_p)`.
    pub fn generic(space: &JetSpace, names: &[&str]) -> Result<Self> {
        if names.len() != space.dependents().len() {
            return Err(Error::validation("one function name per dependent variable"));
        }
        let args: Vec<Expr> = space.independents().iter().map(Expr::symbol).collect();
        Ok(SolutionForm {
            components: space
                .dependents()
                .iter()
                .zip(names)
                .map(|(u, n)| SolutionComponent {
                    dependent: u.clone(),
                    function: n.to_string(),
                    args: args.clone(),
                    scale: Expr::one(),
                    offset: Expr::zero(),
                })
                .collect(),
        })
    }
}

/// Maps a solution through a flow: the new solution is
/// `u~(x) = U_{-eps}(f(X_eps(x)))`, i.e. the graph of `f` carried by the
/// group element with parameter `-eps`. Both the independent images and the
/// dependent images must be decoupled (true for every flow built by [`flow`]).
pub fn transform_solution(space: &JetSpace, g: &PointMap, form: &SolutionForm) -> Result<SolutionForm> {
    let eps = Expr::symbol(&g.parameter);
    let inverse = g.at(&(-&eps))?;
    let xs: BTreeMap<Atom, Expr> = space
        .independents()
        .iter()
        .map(|x| (Atom::from(x), g.image(x)))
        .collect();
    for img in xs.values() {
        if img.contains_where(|a| matches!(a, Atom::Jet(_))) {
            return Err(Error::unsupported("independent images depend on dependent variables"));
        }
    }
    let mut components = Vec::new();
    for c in &form.components {
        let u = Atom::from(&c.dependent);
        let img = inverse.image(&c.dependent);
        let powers = img.powers_of(&u);
        let alpha = powers.get(&1).cloned().unwrap_or_default();
        let beta = powers.get(&0).cloned().unwrap_or_default();
        let base: Vec<Symbol> = space.base_coordinates();
        let depends = |e: &Expr| base.iter().any(|z| e.contains_atom(&Atom::from(z)));
        if powers.keys().any(|&k| k > 1) || depends(&alpha) || depends(&beta) {
            return Err(Error::unsupported(format!(
                "image of {} is not affine in {} alone",
                c.dependent, c.dependent
            )));
        }
        let args = c
            .args
            .iter()
            .map(|a| a.substitute_unchecked(&xs))
            .collect::<Result<Vec<_>>>()?;
        components.push(SolutionComponent {
            dependent: c.dependent.clone(),
            function: c.function.clone(),
            args,
            scale: &alpha * &c.scale,
            offset: &alpha * &c.offset + &beta,
        });
    }
    Ok(SolutionForm { components })
}

#[cfg(test)]
mod tests;
