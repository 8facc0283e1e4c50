//! One function per subcommand, each returning a [`Report`].

mod algebra;
mod optimal;
mod reduce;
mod symmetries;

pub use algebra::{algebra, AlgebraInput};
pub use optimal::optimal;
pub use reduce::reduce;
pub use symmetries::{symmetries, verify};

use serde_json::json;

use liesym::detsys::solve_determining;
use liesym::dsl::Problem;
use liesym::liealg::{from_fields_labeled, LieAlgebra};

use crate::reference;
use crate::report::Section;
use crate::{CliError, CliResult};

/// A computed value that differs from, or reinterprets, a published one.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub item: String,
    pub computed: String,
    pub published: String,
    pub note: String,
}

impl Flag {
    pub fn new(item: &str, computed: impl ToString, published: impl ToString, note: &str) -> Self {
        Flag {
            item: item.into(),
            computed: computed.to_string(),
            published: published.to_string(),
            note: note.into(),
        }
    }
}

pub(crate) fn discrepancies(flags: &[Flag]) -> Section {
    let mut s = Section::new("discrepancies");
    if flags.is_empty() {
        s.line("none");
    }
    for f in flags {
        s.line(format!("flag: {}", f.item));
        s.line(format!("  computed: {}", f.computed));
        s.line(format!("  published: {}", f.published));
        s.line(format!("  note: {}", f.note));
    }
    let items: Vec<_> = flags
        .iter()
        .map(|f| json!({"item": f.item, "computed": f.computed, "published": f.published, "note": f.note}))
        .collect();
    s.set("flags", items);
    s
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// The algebra of a problem: its declared fields, or the computed basis
/// when none are declared.
pub(crate) struct FieldAlgebra {
    pub g: LieAlgebra,
    pub declared: bool,
    /// Whether the published values describe these generators.
    pub reference: bool,
}

pub(crate) fn field_algebra(problem: &Problem) -> CliResult<FieldAlgebra> {
    let (labels, fields, declared) = if problem.vfields.is_empty() {
        let system = problem.system()?;
        let basis = solve_determining(&system, problem.ansatz_degree)?;
        (default_labels(basis.fields.len()), basis.fields, false)
    } else {
        let (l, f): (Vec<_>, Vec<_>) = problem.vfields.iter().cloned().unzip();
        (l, f, true)
    };
    if fields.is_empty() {
        return Err(CliError::input("no vector fields: the symmetry algebra is trivial"));
    }
    let g = from_fields_labeled(&fields, labels.clone())?;
    let reference = reference::applies_to(problem.space())
        && fields == reference::generators()
        && labels == default_labels(4);
    Ok(FieldAlgebra {
        g,
        declared,
        reference,
    })
}
