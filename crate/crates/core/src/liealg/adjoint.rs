use std::fmt;

use num_traits::{One, Zero};

use super::{AlgebraVector, LieAlgebra};
use crate::expr::{Atom, Expr, Symbol, SymbolKind};
use crate::linalg::{self, Matrix};
use crate::{Error, Rational, Result};

/// Matrix of `v -> Ad(exp(eps v_i)) v` in row convention: row `j` holds the
/// coordinates of `Ad(exp(eps v_i)) v_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix {
    pub generator: usize,
    pub parameter: Symbol,
    pub entries: Vec<Vec<Expr>>,
}

impl AdjointMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `x = sum_j x_j v_j  ->  sum_j x_j Ad(v_j)`.
    pub fn apply(&self, x: &AlgebraVector) -> AlgebraVector {
        let n = self.dim();
        let mut out = vec![Expr::zero(); n];
        for (j, xj) in x.coords.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                if !self.entries[j][k].is_zero() {
                    *o += xj * &self.entries[j][k];
                }
            }
        }
        AlgebraVector { coords: out }
    }

    /// Replaces the group parameter. Values that are not rational-linear in
    /// group parameters are accepted only when no entry has an exponential.
    pub fn at(&self, value: &Expr) -> Result<AdjointMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.subs(self.parameter.clone(), value)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(AdjointMatrix {
            generator: self.generator,
            parameter: self.parameter.clone(),
            entries,
        })
    }

    /// Row-convention product: `(self * other)` applies `self` first.
    pub fn mul(&self, other: &AdjointMatrix) -> AdjointMatrix {
        let n = self.dim();
        let mut entries = vec![vec![Expr::zero(); n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            for (k, out) in row.iter_mut().enumerate() {
                for j in 0..n {
                    if !self.entries[i][j].is_zero() && !other.entries[j][k].is_zero() {
                        *out += &self.entries[i][j] * &other.entries[j][k];
                    }
                }
            }
        }
        AdjointMatrix {
            generator: self.generator,
            parameter: self.parameter.clone(),
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() })
        })
    }

    /// True when every entry is a polynomial in the parameter.
    pub fn is_polynomial(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| !e.contains_where(|a| matches!(a, Atom::Exp(_))))
    }

    pub fn derivative(&self) -> AdjointMatrix {
        let p = Atom::from(&self.parameter);
        AdjointMatrix {
            generator: self.generator,
            parameter: self.parameter.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(|e| e.partial(&p)).collect()).collect(),
        }
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }
}

impl fmt::Display for AdjointMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.render();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

fn pow(m: &Matrix, k: usize) -> Matrix {
    let mut out = linalg::identity(m.len());
    for _ in 0..k {
        out = linalg::mat_mul(&out, m);
    }
    out
}

fn sub_scalar(m: &Matrix, l: &Rational) -> Matrix {
    let mut out = m.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= l;
    }
    out
}

/// `exp(-eps ad(v_i))`, transposed into row convention, so that
/// `Ad(exp(eps v_i)) v_j = v_j - eps [v_i, v_j] + eps^2/2 [v_i, [v_i, v_j]] - ...`.
///
/// The exponential is exact: `ad(v_i)` is split over its rational eigenvalues
/// into spectral projectors and a commuting nilpotent part.
pub fn adjoint_matrix(g: &LieAlgebra, i: usize, eps: &Symbol) -> Result<AdjointMatrix> {
    if i >= g.dim() {
        return Err(Error::validation(format!("generator index {i} out of range")));
    }
    if eps.kind() != SymbolKind::GroupParameter {
        return Err(Error::validation(format!("{eps} is not a group parameter")));
    }
    let a = g.ad_basis(i);
    let n = g.dim();
    let poly = linalg::characteristic_polynomial(&a);
    let roots = linalg::rational_roots(&poly)?
        .ok_or_else(|| Error::unsupported(format!("ad({}) has irrational eigenvalues", g.labels()[i])))?;
    if roots.iter().map(|(_, m)| m).sum::<usize>() != n {
        return Err(Error::unsupported(format!(
            "ad({}) has irrational or complex eigenvalues",
            g.labels()[i]
        )));
    }

    // Generalized eigenspaces and their basis matrix S.
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut blocks: Vec<(Rational, usize, std::ops::Range<usize>)> = Vec::new();
    for (l, m) in &roots {
        let space = linalg::nullspace(&pow(&sub_scalar(&a, l), *m), n);
        let start = columns.len();
        columns.extend(space);
        blocks.push((l.clone(), *m, start..columns.len()));
    }
    let s: Matrix = (0..n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let s_inv = linalg::inverse(&s).ok_or_else(|| Error::Closure("generalized eigenvectors are dependent".into()))?;

    let mut projectors = Vec::new();
    let mut semisimple = linalg::zeros(n, n);
    for (l, m, range) in &blocks {
        let mut d = linalg::zeros(n, n);
        for c in range.clone() {
            d[c][c] = Rational::one();
        }
        let p = linalg::mat_mul(&linalg::mat_mul(&s, &d), &s_inv);
        for r in 0..n {
            for c in 0..n {
                semisimple[r][c] += l * &p[r][c];
            }
        }
        projectors.push((l.clone(), *m, p));
    }
    let nil: Matrix = (0..n)
        .map(|r| (0..n).map(|c| &a[r][c] - &semisimple[r][c]).collect())
        .collect();

    // exp(tA) = sum_l e^(l t) P_l sum_k t^k N^k / k!, with t = -eps.
    let t = -Expr::symbol(eps);
    let mut e = vec![vec![Expr::zero(); n]; n];
    for (l, m, p) in &projectors {
        let growth = Expr::exp(-l, eps);
        let mut fact = Rational::one();
        for k in 0..*m {
            if k > 0 {
                fact *= Rational::from_integer(k.into());
            }
            let nk = linalg::mat_mul(&pow(&nil, k), p);
            let scale = &growth * &t.pow(k as u32).scale(&fact.recip());
            for r in 0..n {
                for c in 0..n {
                    if !nk[r][c].is_zero() {
                        e[r][c] += scale.scale(&nk[r][c]);
                    }
                }
            }
        }
    }
    let entries = (0..n).map(|j| (0..n).map(|k| e[k][j].clone()).collect()).collect();
    Ok(AdjointMatrix {
        generator: i,
        parameter: eps.clone(),
        entries,
    })
}
