use std::path::{Path, PathBuf};

use serde_json::json;

use liesym::dsl::parse_table;
use liesym::expr::{Expr, Symbol};
use liesym::liealg::{
    adjoint_matrix, decomposition, derived_series, is_nilpotent, is_solvable, killing_form, lower_central_series,
    radical, LieAlgebra, Subspace,
};
use liesym::Rational;

use super::{default_labels, discrepancies, field_algebra, Flag};
use crate::reference;
use crate::report::{Report, Section};
use crate::{load_problem, read_source, CliError, CliResult};

pub enum AlgebraInput {
    /// A `.pde` file; its declared fields (or computed basis) span the algebra.
    Problem(PathBuf),
    /// A `.lie` file of structure constants.
    Table(PathBuf),
}

/// Loads the algebra and whether the published values apply to it.
pub(crate) fn load_algebra(input: &AlgebraInput) -> CliResult<(LieAlgebra, crate::Input, bool, Option<String>)> {
    match input {
        AlgebraInput::Problem(p) => {
            let (problem, input) = load_problem(p)?;
            let fa = field_algebra(&problem)?;
            let note = (!fa.declared).then(|| "no fields declared; using the computed basis".to_string());
            Ok((fa.g, input, fa.reference, note))
        }
        AlgebraInput::Table(p) => {
            let src = read_source(p)?;
            let g = parse_table(&src.text).map_err(|e| CliError::from(e).context_path(p))?;
            let reference = g.labels() == default_labels(4).as_slice();
            Ok((g, src.input, reference, None))
        }
    }
}

impl CliError {
    pub(crate) fn context_path(mut self, p: &Path) -> Self {
        self.message = format!("{}: {}", p.display(), self.message);
        self
    }
}

fn series_text(s: &[Subspace], labels: &[String]) -> Vec<String> {
    s.iter()
        .enumerate()
        .map(|(i, sub)| if i == 0 { "g".to_string() } else { sub.display_with(labels) })
        .collect()
}

fn matrix_rows(m: &[Vec<String>]) -> Vec<String> {
    let width = m.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    m.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("[ {} ]", cells.join("  "))
        })
        .collect()
}

fn rational_rows(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
}

pub fn algebra(input: &AlgebraInput) -> CliResult<Report> {
    let (g, inp, reference, note) = load_algebra(input)?;
    let mut report = Report::new("algebra", Some(inp));
    if matches!(input, AlgebraInput::Table(_)) {
        report.option("from-table", "yes");
    }
    let labels = g.labels().to_vec();
    let n = g.dim();
    let mut flags = Vec::new();

    let mut s = Section::new("commutators");
    if let Some(note) = &note {
        s.field("note", note);
    }
    s.field("dimension", n);
    for line in g.render_table().lines() {
        s.line(line);
    }
    let cells: Vec<Vec<String>> = g
        .commutator_table()
        .iter()
        .map(|r| r.iter().map(|v| v.display_with(&labels)).collect())
        .collect();
    s.set("labels", labels.clone());
    s.set("table", cells.clone());
    if reference {
        let mut mismatched = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if cells[i][j] != reference::COMMUTATORS[i][j] {
                    mismatched.push(format!(
                        "[{}, {}]: computed {}, published {}",
                        labels[i], labels[j], cells[i][j], reference::COMMUTATORS[i][j]
                    ));
                }
            }
        }
        s.field("published_table", if mismatched.is_empty() { "matches cell for cell" } else { "differs" });
        if !mismatched.is_empty() {
            s.list("mismatched_cells", &mismatched);
        }
    }
    report.push(s);

    let mut s = Section::new("adjoint");
    let eps = Symbol::group_parameter("eps");
    let (e1, e2) = (Symbol::group_parameter("e1"), Symbol::group_parameter("e2"));
    let mut mats = serde_json::Map::new();
    for i in 0..n {
        let m = match adjoint_matrix(&g, i, &eps) {
            Ok(m) => m,
            Err(liesym::Error::NotSupported(msg)) => {
                s.line(format!("M{}: not supported: {msg}", i + 1));
                mats.insert(format!("M{}", i + 1), json!(format!("not supported: {msg}")));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let law = m
            .at(&Expr::symbol(&e1))?
            .mul(&m.at(&Expr::symbol(&e2))?)
            == m.at(&(Expr::symbol(&e1) + Expr::symbol(&e2)))?;
        if !law {
            return Err(CliError::internal(format!("group law fails for Ad(exp(eps*{}))", labels[i])));
        }
        let cells = m.render();
        s.line(format!("M{} = Ad(exp(eps*{})), row j is the image of v_j:", i + 1, labels[i]));
        for r in matrix_rows(&cells) {
            s.line(format!("  {r}"));
        }
        s.line("  group law Ad(e1)Ad(e2) = Ad(e1 + e2): holds");
        if reference {
            let published = reference::adjoint(i);
            let same = (0..4).all(|r| (0..4).all(|c| cells[r][c] == published[r][c]));
            s.line(format!("  published matrix: {}", if same { "matches" } else { "differs" }));
            if !same {
                let p: Vec<Vec<String>> = published.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
                flags.push(Flag::new(
                    &format!("adjoint matrix M{}", i + 1),
                    matrix_rows(&cells).join(" "),
                    matrix_rows(&p).join(" "),
                    "entry-wise comparison in row convention",
                ));
            }
        }
        mats.insert(
            format!("M{}", i + 1),
            json!({"entries": cells, "group_law": "holds"}),
        );
    }
    s.set("matrices", serde_json::Value::Object(mats));
    report.push(s);

    let mut s = Section::new("series");
    let derived = derived_series(&g);
    let lower = lower_central_series(&g);
    let dtext = series_text(&derived, &labels);
    let ltext = series_text(&lower, &labels);
    s.field("derived", dtext.join(" ⊃ "));
    s.field("lower_central", ltext.join(" ⊃ "));
    s.field("solvable", if is_solvable(&g) { "yes" } else { "no" });
    s.field("nilpotent", if is_nilpotent(&g) { "yes" } else { "no" });
    report.push(s);
    if reference {
        let published = format!("g ⊃ {}", reference::DERIVED_SERIES[1..].join(" ⊃ "));
        if dtext.join(" ⊃ ") != published {
            flags.push(Flag::new(
                "derived series",
                dtext.join(" ⊃ "),
                published,
                "the printed series repeats g as its first derived algebra and never reaches 0, \
                 which contradicts the printed table and the solvability claim",
            ));
        }
    }

    let mut s = Section::new("killing");
    let k = killing_form(&g);
    let cells = rational_rows(&k);
    for r in matrix_rows(&cells) {
        s.line(r);
    }
    s.set("matrix", cells);
    s.field("rank", liesym::linalg::rank(&k));
    report.push(s);

    let mut s = Section::new("radical");
    let r = radical(&g);
    let whole = r.dim() == n;
    s.field("radical", if whole { "g".to_string() } else { r.display_with(&labels) });
    s.field("equals_g", if whole { "yes" } else { "no" });
    if reference {
        s.field("published", "g = r");
        s.field("consistent", if whole { "yes" } else { "no" });
    }
    report.push(s);

    let mut s = Section::new("decomposition");
    let d = decomposition(&g);
    s.field("name", &d.name);
    s.field("center", d.center.display_with(&labels));
    if let Some(w) = &d.complement {
        s.field("complement", w.display_with(&labels));
    }
    if reference {
        s.field("published", reference::DECOMPOSITION);
        s.field("consistent", if d.name == reference::DECOMPOSITION { "yes" } else { "no" });
    }
    report.push(s);

    if reference {
        report.push(discrepancies(&flags));
    }
    Ok(report)
}
