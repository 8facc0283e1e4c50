use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::jet::{JetCoordinate, MultiIndex};
use crate::Rational;

/// Role of a symbol. The declaration order here is the primary atom ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Parameter,
    GroupParameter,
    Independent,
    Dependent,
    /// An unknown function of the base coordinates (used for generic infinitesimals).
    Function,
    AnsatzUnknown,
}

impl SymbolKind {
    fn rank(self) -> u8 {
        match self {
            SymbolKind::Parameter => 0,
            SymbolKind::GroupParameter => 1,
            SymbolKind::Independent => 3,
            SymbolKind::Dependent => 4,
            SymbolKind::Function => 5,
            SymbolKind::AnsatzUnknown => 6,
        }
    }
}

/// A named symbol. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    kind: SymbolKind,
    name: Arc<str>,
}

impl Symbol {
    pub fn new(name: impl AsRef<str>, kind: SymbolKind) -> Self {
        Symbol {
            kind,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn independent(name: &str) -> Self {
        Self::new(name, SymbolKind::Independent)
    }

    pub fn dependent(name: &str) -> Self {
        Self::new(name, SymbolKind::Dependent)
    }

    pub fn parameter(name: &str) -> Self {
        Self::new(name, SymbolKind::Parameter)
    }

    pub fn group_parameter(name: &str) -> Self {
        Self::new(name, SymbolKind::GroupParameter)
    }

    pub fn unknown(name: &str) -> Self {
        Self::new(name, SymbolKind::AnsatzUnknown)
    }

    pub fn function(name: &str) -> Self {
        Self::new(name, SymbolKind::Function)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .rank()
            .cmp(&other.kind.rank())
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `exp(rate * arg)` for a group parameter `arg`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpAtom {
    pub rate: Rational,
    pub arg: Symbol,
}

impl ExpAtom {
    pub fn new(rate: Rational, arg: Symbol) -> Self {
        ExpAtom { rate, arg }
    }
}

/// An indeterminate of the polynomial kernel.
///
/// Dependent variables and unknown functions are always carried as order-0
/// jet coordinates; use [`Atom::from`] on a [`Symbol`] to get that mapping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Symbol(Symbol),
    Jet(JetCoordinate),
    Exp(ExpAtom),
}

impl From<Symbol> for Atom {
    fn from(s: Symbol) -> Self {
        match s.kind() {
            SymbolKind::Dependent | SymbolKind::Function => {
                Atom::Jet(JetCoordinate::new(s, MultiIndex::zero()))
            }
            _ => Atom::Symbol(s),
        }
    }
}

impl From<&Symbol> for Atom {
    fn from(s: &Symbol) -> Self {
        Atom::from(s.clone())
    }
}

impl From<JetCoordinate> for Atom {
    fn from(j: JetCoordinate) -> Self {
        Atom::Jet(j)
    }
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::Symbol(s) => s.kind().rank(),
            Atom::Jet(j) => j.dependent.kind().rank(),
            Atom::Exp(_) => 2,
        }
    }

    fn name(&self) -> &str {
        match self {
            Atom::Symbol(s) => s.name(),
            Atom::Jet(j) => j.dependent.name(),
            Atom::Exp(e) => e.arg.name(),
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Atom::Symbol(_) => 0,
            Atom::Jet(_) => 1,
            Atom::Exp(_) => 2,
        }
    }

    pub fn as_jet(&self) -> Option<&JetCoordinate> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            Atom::Symbol(s) => Some(s),
            _ => None,
        }
    }

    /// The symbol kind of the atom; exponential atoms report their argument's kind.
    pub fn kind(&self) -> SymbolKind {
        match self {
            Atom::Symbol(s) => s.kind(),
            Atom::Jet(j) => j.dependent.kind(),
            Atom::Exp(e) => e.arg.kind(),
        }
    }

    /// True for jets of dependent variables of order at least one.
    pub fn is_derivative_jet(&self) -> bool {
        matches!(self, Atom::Jet(j) if j.dependent.kind() == SymbolKind::Dependent && j.order() > 0)
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.name().cmp(other.name()))
            .then_with(|| self.tag().cmp(&other.tag()))
            .then_with(|| match (self, other) {
                (Atom::Symbol(a), Atom::Symbol(b)) => a.cmp(b),
                (Atom::Jet(a), Atom::Jet(b)) => a.cmp(b),
                (Atom::Exp(a), Atom::Exp(b)) => a.arg.cmp(&b.arg).then_with(|| a.rate.cmp(&b.rate)),
                _ => Ordering::Equal,
            })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Symbol(s) => write!(f, "{s}"),
            Atom::Jet(j) => write!(f, "{j}"),
            Atom::Exp(e) => {
                if e.rate.is_one() {
                    write!(f, "exp({})", e.arg)
                } else if (-&e.rate).is_one() {
                    write!(f, "exp(-{})", e.arg)
                } else if e.rate.is_zero() {
                    f.write_str("1")
                } else if e.rate.is_negative() {
                    write!(f, "exp(-{}*{})", -&e.rate, e.arg)
                } else {
                    write!(f, "exp({}*{})", e.rate, e.arg)
                }
            }
        }
    }
}
