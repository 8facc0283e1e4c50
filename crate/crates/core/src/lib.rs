//! Exact Lie point-symmetry analysis of polynomial PDE systems.
//!
//! The crate is organized bottom-up:
//!
//! * [`expr`]: canonical polynomials over rational numbers,
//! * [`jet`]: jet coordinates and total derivatives,
//! * [`vfield`]: generators, prolongation, brackets, flows and invariants,
//! * [`detsys`]: determining equations and their polynomial solutions,
//! * [`liealg`]: structure constants, adjoint action, subalgebras,
//!   optimal-system helpers and structure theory,
//! * [`dsl`]: the `.pde` input language,
//! * [`linalg`]: exact rational linear algebra shared by the above.

pub mod error;
pub mod expr;
pub mod jet;
pub mod linalg;
pub mod vfield;
pub mod detsys;
pub mod liealg;
pub mod dsl;

pub use error::{Error, ParseError, Result};
pub use expr::{Atom, ExpAtom, Expr, Monomial, RawExpr, Symbol, SymbolKind};
pub use jet::{JetCoordinate, JetSpace, MultiIndex};

/// Exact rational numbers used throughout.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
