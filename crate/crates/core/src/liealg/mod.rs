//! Finite-dimensional Lie algebras given by exact structure constants.

mod adjoint;
mod structure;
mod subalgebra;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::detsys::coordinates_in;
use crate::expr::{Atom, Expr};
use crate::linalg::Matrix;
use crate::vfield::{lie_bracket, VectorField};
use crate::{Error, Rational, Result};

pub use adjoint::{adjoint_matrix, AdjointMatrix};
pub use structure::{
    center, decomposition, derived_series, is_nilpotent, is_solvable, killing_form, lower_central_series,
    radical, Decomposition, Subspace,
};
pub use subalgebra::{
    classify_1d, is_extension_unknown, is_subalgebra, normalize_1d, solve_pair_condition, solve_triple_condition, AdjointMove,
    ExtensionCase, ExtensionConditions, Normalized, OneDimClass, SubalgebraCheck, Verdict,
};

/// `[v_i, v_j] = sum_k C^k_ij v_k`, stored as `c[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    c: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(labels: Vec<String>, c: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = labels.len();
        if c.len() != n || c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::validation(format!("structure constants must be {n}x{n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if c[i][j][k] != -&c[j][i][k] {
                        return Err(Error::validation(format!(
                            "constants are not antisymmetric at [{}, {}]",
                            labels[i], labels[j]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Rational::zero();
                        for m in 0..n {
                            s += &c[i][j][m] * &c[m][k][l] + &c[j][k][m] * &c[m][i][l] + &c[k][i][m] * &c[m][j][l];
                        }
                        if !s.is_zero() {
                            return Err(Error::validation(format!(
                                "Jacobi identity fails for ({}, {}, {})",
                                labels[i], labels[j], labels[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(LieAlgebra { labels, c })
    }

    /// Builds from the brackets `[v_i, v_j]` with `i < j`; the rest are zero.
    pub fn from_brackets(labels: Vec<String>, brackets: &[(usize, usize, Vec<Rational>)]) -> Result<Self> {
        let n = labels.len();
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, v) in brackets {
            if *i >= n || *j >= n || v.len() != n {
                return Err(Error::validation("bracket index or length out of range"));
            }
            if i == j && v.iter().any(|x| !x.is_zero()) {
                return Err(Error::validation(format!("[{0}, {0}] must vanish", labels[*i])));
            }
            c[*i][*j] = v.clone();
            c[*j][*i] = v.iter().map(|x| -x).collect();
        }
        Self::new(labels, c)
    }

    pub fn abelian(n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("v{i}")).collect();
        LieAlgebra {
            labels,
            c: vec![vec![vec![Rational::zero(); n]; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    pub fn constants(&self) -> &[Vec<Vec<Rational>>] {
        &self.c
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> AlgebraVector {
        AlgebraVector::from_rationals(&self.c[i][j])
    }

    pub fn bracket_rational(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *o += &f * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let n = self.dim();
        let mut out = vec![Expr::zero(); n];
        for i in 0..n {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y.coords[j].is_zero() {
                    continue;
                }
                let f = &x.coords[i] * &y.coords[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *o += f.scale(&self.c[i][j][k]);
                    }
                }
            }
        }
        AlgebraVector { coords: out }
    }

    /// `ad(x)` in column convention: column `j` holds `[x, v_j]`.
    pub fn ad(&self, x: &[Rational]) -> Matrix {
        let n = self.dim();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            let b = self.bracket_rational(x, &e);
            for k in 0..n {
                m[k][j] = b[k].clone();
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut e = vec![Rational::zero(); self.dim()];
        e[i] = Rational::one();
        self.ad(&e)
    }

    /// Rendering of the commutator table: row `i`, column `j` is `[v_i, v_j]`.
    pub fn commutator_table(&self) -> Vec<Vec<AlgebraVector>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.bracket_basis(i, j)).collect()).collect()
    }

    pub fn render_table(&self) -> String {
        let table = self.commutator_table();
        let mut cells: Vec<Vec<String>> = vec![std::iter::once("[ , ]".to_string()).chain(self.labels.iter().cloned()).collect()];
        for (i, row) in table.iter().enumerate() {
            let mut r = vec![self.labels[i].clone()];
            r.extend(row.iter().map(|v| v.display_with(&self.labels)));
            cells.push(r);
        }
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Algebra from generators: every bracket must lie in their span.
pub fn from_fields(basis: &[VectorField]) -> Result<LieAlgebra> {
    let labels = (1..=basis.len()).map(|i| format!("v{i}")).collect();
    from_fields_labeled(basis, labels)
}

pub fn from_fields_labeled(basis: &[VectorField], labels: Vec<String>) -> Result<LieAlgebra> {
    if labels.len() != basis.len() {
        return Err(Error::validation("one label per field"));
    }
    if crate::detsys::span_rank(basis) != basis.len() {
        return Err(Error::validation("fields are linearly dependent"));
    }
    let mut brackets = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let b = lie_bracket(&basis[i], &basis[j]);
            let coords = coordinates_in(basis, &b).ok_or_else(|| {
                Error::Closure(format!("[{}, {}] = {b} is not in the span of the basis", labels[i], labels[j]))
            })?;
            brackets.push((i, j, coords));
        }
    }
    LieAlgebra::from_brackets(labels, &brackets)
}

/// A vector `sum_i coords[i] v_i` with possibly symbolic coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlgebraVector {
    pub coords: Vec<Expr>,
}

impl AlgebraVector {
    pub fn new(coords: Vec<Expr>) -> Self {
        AlgebraVector { coords }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraVector {
            coords: vec![Expr::zero(); n],
        }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coords[i] = Expr::one();
        v
    }

    pub fn from_rationals(v: &[Rational]) -> Self {
        AlgebraVector {
            coords: v.iter().map(|c| Expr::constant(c.clone())).collect(),
        }
    }

    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.coords.iter().map(Expr::as_constant).collect()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Expr::is_zero)
    }

    pub fn add(&self, other: &AlgebraVector) -> AlgebraVector {
        AlgebraVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &Expr) -> AlgebraVector {
        AlgebraVector {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<AlgebraVector> {
        Ok(AlgebraVector {
            coords: self.coords.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<Atom> {
        self.coords.iter().flat_map(|c| c.atoms()).collect()
    }

    /// `b1*v1 + b2*v2 + v3`.
    pub fn display_with(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (c, l) in self.coords.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = match c.as_constant() {
                Some(k) if k.abs().is_one() => (k.is_negative(), l.clone()),
                Some(k) => (k.is_negative(), format!("{}*{l}", k.abs())),
                None if c.len() == 1 => {
                    let neg = c.terms().next().is_some_and(|(_, k)| k.is_negative());
                    let mag = if neg { -c } else { c.clone() };
                    (neg, format!("{mag}*{l}"))
                }
                None => (false, format!("({c})*{l}")),
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

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (1..=self.len()).map(|i| format!("v{i}")).collect();
        f.write_str(&self.display_with(&labels))
    }
}

pub(crate) fn det(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut out = Expr::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Expr>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, e)| e.clone()).collect())
                    .collect();
                let t = &m[0][c] * &det(&minor);
                if c % 2 == 0 {
                    out += t;
                } else {
                    out -= &t;
                }
            }
            out
        }
    }
}

/// All maximal minors of a `k x n` matrix with `k <= n`.
pub(crate) fn maximal_minors(rows: &[Vec<Expr>]) -> Vec<Expr> {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut cols: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        let sub: Vec<Vec<Expr>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        out.push(det(&sub));
        let Some(i) = (0..k).rev().find(|&i| cols[i] < i + n - k) else {
            return out;
        };
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests;
