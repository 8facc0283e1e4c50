//! Exact rational linear algebra.
//!
//! Small dense helpers serve the Lie algebra code; [`FractionFreeEliminator`]
//! handles the large sparse systems produced by determining equations. It
//! keeps integer rows and removes row content after every combination, so
//! no rational arithmetic happens until back-substitution.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn trace(a: &Matrix) -> Rational {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// Reduced row echelon form.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon {
    /// Nonzero rows, each with leading entry 1 at its pivot column.
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

pub fn rref(rows: &[Vec<Rational>]) -> Echelon {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).pivots.len()
}

/// Basis of `{v : rows * v = 0}` derived from the reduced echelon form.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let e = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the span of `basis` (rows), if it lies there.
pub fn solve_in_span(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let n = v.len();
    // Columns are basis vectors, plus v as an augmented column.
    let mut aug: Matrix = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![Rational::zero(); k]);
    }
    let e = rref(&aug);
    if e.pivots.contains(&k) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        coeffs[p] = row[k].clone();
    }
    aug.clear();
    Some(coeffs)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let e = rref(&aug);
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `c_0..c_n` of `det(t I - A)`, lowest degree first.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        coeffs[n - k] = -trace(&am) / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Rational roots with multiplicity. Returns `Ok(None)` when the polynomial
/// does not split over the rationals.
pub fn rational_roots(poly: &[Rational]) -> Result<Option<Vec<(Rational, usize)>>> {
    let mut p: Vec<Rational> = poly.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let degree = p.len().saturating_sub(1);
    let mut roots: Vec<(Rational, usize)> = Vec::new();
    let push = |r: Rational, roots: &mut Vec<(Rational, usize)>| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    };
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        push(Rational::zero(), &mut roots);
    }
    while p.len() > 1 {
        let ints = integer_coefficients(&p);
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let bound = BigInt::from(1u64 << 40);
        if a0 > bound || an > bound {
            return Err(Error::unsupported("eigenvalue search on coefficients this large"));
        }
        let mut found = None;
        'outer: for num in divisors(&a0) {
            for den in divisors(&an) {
                for sign in [1i32, -1] {
                    let r = Rational::new(&num * BigInt::from(sign), den.clone());
                    if eval_poly(&p, &r).is_zero() {
                        found = Some(r);
                        break 'outer;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                p = deflate(&p, &r);
                push(r, &mut roots);
            }
            None => return Ok(None),
        }
    }
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    debug_assert_eq!(total, degree);
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Some(roots))
}

fn integer_coefficients(p: &[Rational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn eval_poly(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

// Divides by (t - r); r must be a root.
fn deflate(p: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..=n).rev() {
        let c = &p[i] + &carry * r;
        if i > 0 {
            q[i - 1] = c.clone();
        }
        carry = c;
    }
    q
}

type SparseIntRow = Vec<(usize, BigInt)>;

/// Incremental fraction-free Gaussian elimination over sparse integer rows.
#[derive(Debug, Clone)]
pub struct FractionFreeEliminator {
    ncols: usize,
    pivots: BTreeMap<usize, SparseIntRow>,
}

impl FractionFreeEliminator {
    pub fn new(ncols: usize) -> Self {
        FractionFreeEliminator {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row given as `(column, value)` pairs. Returns true if the rank grew.
    pub fn push(&mut self, row: &[(usize, Rational)]) -> bool {
        let l = row.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut r: SparseIntRow = row
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (*j, (c * Rational::from_integer(l.clone())).to_integer()))
            .collect();
        r.sort_by_key(|(j, _)| *j);
        normalize_int_row(&mut r);
        loop {
            let Some((lead, _)) = r.first().cloned() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    r = combine(p, &r, lead);
                }
                None => {
                    self.pivots.insert(lead, r);
                    return true;
                }
            }
        }
    }

    /// Reduced echelon rows over the rationals, keyed by pivot column.
    pub fn reduced(&self) -> BTreeMap<usize, Vec<(usize, Rational)>> {
        let mut rows = self.pivots.clone();
        let cols: Vec<usize> = rows.keys().rev().copied().collect();
        for c in cols {
            let pivot_row = rows[&c].clone();
            let targets: Vec<usize> = rows
                .iter()
                .filter(|(k, row)| **k < c && row.iter().any(|(j, _)| *j == c))
                .map(|(k, _)| *k)
                .collect();
            for k in targets {
                let row = rows.get_mut(&k).expect("target row");
                *row = combine(&pivot_row, row, c);
            }
        }
        rows.into_iter()
            .map(|(c, row)| {
                let lead = Rational::from_integer(row[0].1.clone());
                let out = row
                    .into_iter()
                    .map(|(j, v)| (j, Rational::from_integer(v) / &lead))
                    .collect();
                (c, out)
            })
            .collect()
    }

    /// Basis of the null space, one vector per free column, in column order.
    pub fn nullspace(&self) -> Matrix {
        let red = self.reduced();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !red.contains_key(c)).collect();
        let mut by_col: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for (p, row) in &red {
            for (j, v) in row {
                if j != p {
                    by_col.entry(*j).or_default().push((*p, v.clone()));
                }
            }
        }
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                if let Some(entries) = by_col.get(&f) {
                    for (p, val) in entries {
                        v[*p] = -val.clone();
                    }
                }
                v
            })
            .collect()
    }
}

// Eliminates column `col` of `row` using `pivot` (whose entry at `col` is
// nonzero): pivot[col] * row - row[col] * pivot, then content removal.
fn combine(pivot: &SparseIntRow, row: &SparseIntRow, col: usize) -> SparseIntRow {
    let a = &pivot.iter().find(|(j, _)| *j == col).expect("pivot entry").1;
    let b = match row.iter().find(|(j, _)| *j == col) {
        Some((_, b)) => b.clone(),
        None => return row.clone(),
    };
    let g = a.gcd(&b);
    let a = a / &g;
    let b = &b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|x| x.0);
        let cj = pivot.get(j).map(|x| x.0);
        let (c, v) = match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a * &row[i].1 - &b * &pivot[j].1;
                i += 1;
                j += 1;
                (x, v)
            }
            (Some(x), Some(y)) if x < y => {
                let v = &a * &row[i].1;
                i += 1;
                (x, v)
            }
            (Some(x), None) => {
                let v = &a * &row[i].1;
                i += 1;
                (x, v)
            }
            (_, Some(y)) => {
                let v = -(&b * &pivot[j].1);
                j += 1;
                (y, v)
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    normalize_int_row(&mut out);
    out
}

fn normalize_int_row(r: &mut SparseIntRow) {
    let g = r.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if g.is_zero() {
        return;
    }
    let neg = r.first().is_some_and(|(_, v)| v.is_negative());
    for (_, v) in r.iter_mut() {
        *v = &*v / &g;
        if neg {
            *v = -&*v;
        }
    }
}
