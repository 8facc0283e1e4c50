use std::fmt;

use num_traits::Zero;

use super::{Atom, ExpAtom};
use crate::Rational;

/// A power product of atoms, sorted by the atom ordering.
///
/// Exponential atoms always carry exponent 1, appear at most once per group
/// parameter, and never have rate zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(atom: Atom) -> Self {
        Self::from_factors([(atom, 1)])
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut v: Vec<(Atom, u32)> = factors.into_iter().filter(|(_, e)| *e > 0).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(v.len());
        for (a, e) in v {
            match out.last_mut() {
                Some((last, le)) if *last == a => *le += e,
                _ => out.push((a, e)),
            }
        }
        let mut m = Monomial(out);
        m.fold_exponentials();
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn degree_in(&self, atom: &Atom) -> u32 {
        self.0
            .binary_search_by(|(a, _)| a.cmp(atom))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.0.is_empty() {
            return other.clone();
        }
        if other.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let mut has_exp = false;
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        for (a, _) in &out {
            if matches!(a, Atom::Exp(_)) {
                has_exp = true;
                break;
            }
        }
        let mut m = Monomial(out);
        if has_exp {
            m.fold_exponentials();
        }
        m
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial::from_factors(self.0.iter().map(|(a, e)| (a.clone(), e * n)))
    }

    /// Removes one power of `atom`; returns the exponent it had.
    pub fn divide_atom(&self, atom: &Atom) -> Option<(u32, Monomial)> {
        let i = self.0.binary_search_by(|(a, _)| a.cmp(atom)).ok()?;
        let mut v = self.0.clone();
        let e = v[i].1;
        if e == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some((e, Monomial(v)))
    }

    /// Drops every power of `atom`; returns the exponent it had.
    pub fn without(&self, atom: &Atom) -> (u32, Monomial) {
        match self.0.binary_search_by(|(a, _)| a.cmp(atom)) {
            Ok(i) => {
                let mut v = self.0.clone();
                let (_, e) = v.remove(i);
                (e, Monomial(v))
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Splits into the part over atoms satisfying `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&Atom) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(x, _)| pred(x));
        (Monomial(a), Monomial(b))
    }

    // Exponentials of the same group parameter sort next to each other, so a
    // single pass merges them.
    fn fold_exponentials(&mut self) {
        if !self.0.iter().any(|(a, _)| matches!(a, Atom::Exp(_))) {
            return;
        }
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len());
        for (a, e) in self.0.drain(..) {
            match a {
                Atom::Exp(ExpAtom { rate, arg }) => {
                    let rate = rate * Rational::from_integer(e.into());
                    if let Some((Atom::Exp(prev), _)) = out.last_mut() {
                        if prev.arg == arg {
                            prev.rate += rate;
                            continue;
                        }
                    }
                    out.push((Atom::Exp(ExpAtom { rate, arg }), 1));
                }
                other => out.push((other, e)),
            }
        }
        out.retain(|(a, _)| !matches!(a, Atom::Exp(x) if x.rate.is_zero()));
        // Merged rates can change the relative order of exponential atoms.
        out.sort_by(|a, b| a.0.cmp(&b.0));
        self.0 = out;
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        // Exponential factors print last: `T*exp(eps)`.
        let (exps, rest): (Vec<_>, Vec<_>) = self.0.iter().partition(|(a, _)| matches!(a, Atom::Exp(_)));
        for (i, (a, e)) in rest.into_iter().chain(exps).enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{e}")?;
            }
        }
        Ok(())
    }
}
