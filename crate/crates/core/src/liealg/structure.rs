use num_traits::{One, Zero};

use super::{AlgebraVector, LieAlgebra};
use crate::linalg::{self, Matrix};
use crate::Rational;

/// A subspace in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Matrix,
}

impl Subspace {
    pub fn span(vectors: Vec<Vec<Rational>>) -> Self {
        Subspace {
            basis: linalg::rref(&vectors).rows,
        }
    }

    pub fn whole(n: usize) -> Self {
        Subspace {
            basis: linalg::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.iter().all(Zero::is_zero) || linalg::solve_in_span(&self.basis, v).is_some()
    }

    /// `0` or `⟨v3⟩`, `⟨v1, v2 + v3⟩`.
    pub fn display_with(&self, labels: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let items: Vec<String> = self
            .basis
            .iter()
            .map(|r| AlgebraVector::from_rationals(r).display_with(labels))
            .collect();
        format!("⟨{}⟩", items.join(", "))
    }
}

fn bracket_span(g: &LieAlgebra, a: &Subspace, b: &Subspace) -> Subspace {
    let mut vs = Vec::new();
    for x in &a.basis {
        for y in &b.basis {
            let z = g.bracket_rational(x, y);
            if z.iter().any(|c| !c.is_zero()) {
                vs.push(z);
            }
        }
    }
    Subspace::span(vs)
}

/// `g ⊇ g' ⊇ g'' ⊇ ...`, stopping at zero or when the series stabilizes.
/// The first entry is `g` itself.
pub fn derived_series(g: &LieAlgebra) -> Vec<Subspace> {
    let mut out = vec![Subspace::whole(g.dim())];
    loop {
        let last = out.last().expect("nonempty");
        let next = bracket_span(g, last, last);
        let stop = next.is_zero() || next.dim() == last.dim();
        let done = next.dim() == last.dim();
        if !done {
            out.push(next);
        }
        if stop {
            return out;
        }
    }
}

/// `g ⊇ [g, g] ⊇ [g, [g, g]] ⊇ ...`, first entry `g`.
pub fn lower_central_series(g: &LieAlgebra) -> Vec<Subspace> {
    let whole = Subspace::whole(g.dim());
    let mut out = vec![whole.clone()];
    loop {
        let last = out.last().expect("nonempty");
        let next = bracket_span(g, &whole, last);
        let done = next.dim() == last.dim();
        let zero = next.is_zero();
        if !done {
            out.push(next);
        }
        if done || zero {
            return out;
        }
    }
}

pub fn is_solvable(g: &LieAlgebra) -> bool {
    g.dim() == 0 || derived_series(g).last().is_some_and(Subspace::is_zero)
}

pub fn is_nilpotent(g: &LieAlgebra) -> bool {
    g.dim() == 0 || lower_central_series(g).last().is_some_and(Subspace::is_zero)
}

/// `K_ij = trace(ad v_i ad v_j)`.
pub fn killing_form(g: &LieAlgebra) -> Matrix {
    let n = g.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| g.ad_basis(i)).collect();
    (0..n)
        .map(|i| (0..n).map(|j| linalg::trace(&linalg::mat_mul(&ads[i], &ads[j]))).collect())
        .collect()
}

/// The orthogonal complement of `[g, g]` under the Killing form.
pub fn radical(g: &LieAlgebra) -> Subspace {
    let n = g.dim();
    let k = killing_form(g);
    let d = bracket_span(g, &Subspace::whole(n), &Subspace::whole(n));
    let rows: Matrix = d
        .basis
        .iter()
        .map(|y| (0..n).map(|i| (0..n).map(|j| &k[i][j] * &y[j]).sum()).collect())
        .collect();
    if rows.is_empty() {
        return Subspace::whole(n);
    }
    Subspace::span(linalg::nullspace(&rows, n))
}

/// `{x : [x, v_j] = 0 for all j}`.
pub fn center(g: &LieAlgebra) -> Subspace {
    let n = g.dim();
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            rows.push((0..n).map(|i| g.constant(i, j, k).clone()).collect::<Vec<_>>());
        }
    }
    Subspace::span(linalg::nullspace(&rows, n))
}

/// `g = Z ⊕ W` with `Z` the center and `W ⊇ [g, g]` an ideal, when the
/// center meets `[g, g]` trivially.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub center: Subspace,
    pub complement: Option<Subspace>,
    pub name: String,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if n == 1 {
        return String::new();
    }
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize]).collect()
}

fn name_of(g: &LieAlgebra, w: &Subspace) -> String {
    let d = bracket_span(g, w, w);
    match (w.dim(), d.dim()) {
        (k, 0) => format!("ℝ{}", superscript(k)),
        (2, 1) => "a(1)".into(),
        (k, _) => format!("a {k}-dimensional non-abelian ideal"),
    }
}

pub fn decomposition(g: &LieAlgebra) -> Decomposition {
    let n = g.dim();
    let z = center(g);
    let d = bracket_span(g, &Subspace::whole(n), &Subspace::whole(n));
    let mut both = z.basis.clone();
    both.extend(d.basis.iter().cloned());
    if linalg::rank(&both) < z.dim() + d.dim() {
        return Decomposition {
            center: z,
            complement: None,
            name: "no central splitting".into(),
        };
    }
    // Extend Z + [g, g] to g by unit vectors; W = [g, g] + those vectors.
    let mut w = d.basis.clone();
    let mut acc = both;
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        let mut trial = acc.clone();
        trial.push(e.clone());
        if linalg::rank(&trial) > linalg::rank(&acc) {
            acc = trial;
            w.push(e);
        }
    }
    let w = Subspace::span(w);
    let name = match (z.dim(), w.dim()) {
        (0, _) => name_of(g, &w),
        (_, 0) => name_of(g, &z),
        _ => format!("{} ⊕ {}", name_of(g, &z), name_of(g, &w)),
    };
    Decomposition {
        center: z,
        complement: Some(w),
        name,
    }
}
