use std::path::Path;

use liesym::expr::{Expr, Symbol};
use liesym::vfield::{flow, invariants, transform_solution, SolutionForm};

use super::{discrepancies, Flag};
use crate::reference;
use crate::report::{Report, Section};
use crate::{load_problem, CliError, CliResult};

fn solution_names(n: usize) -> Vec<String> {
    if n == reference::SOLUTION_NAMES.len() {
        return reference::SOLUTION_NAMES.iter().map(|s| s.to_string()).collect();
    }
    (1..=n).map(|i| format!("f{i}")).collect()
}

pub fn reduce(path: &Path, field: &str) -> CliResult<Report> {
    let (problem, input) = load_problem(path)?;
    let v = problem
        .field(field)
        .map_err(|e| CliError::input(format!("unknown field `{field}`: {e}")))?;
    let space = problem.space();
    let mut report = Report::new("reduce", Some(input));
    report.option("vfield", field);

    let eps = Symbol::group_parameter("eps");
    let g = flow(space, &v, &eps)?;
    let (e1, e2) = (Symbol::group_parameter("e1"), Symbol::group_parameter("e2"));
    let law = g.at(&Expr::symbol(&e1))?.compose(&g.at(&Expr::symbol(&e2))?)?
        == g.at(&(Expr::symbol(&e1) + Expr::symbol(&e2)))?;
    if !law {
        return Err(CliError::internal("the computed flow violates the group law"));
    }
    let index = if reference::applies_to(space) {
        reference::generators().iter().position(|r| *r == v)
    } else {
        None
    };
    let mut flags = Vec::new();

    let mut s = Section::new("flow");
    s.field("field", v.display_in(space));
    let coords: Vec<String> = space.base_coordinates().iter().map(|z| z.to_string()).collect();
    s.field("coordinates", format!("({})", coords.join(", ")));
    s.field("map", &g);
    s.field("group_law", "holds");
    if let Some(i) = index {
        let same = g.to_string() == reference::GROUPS[i];
        s.field("published", reference::GROUPS[i]);
        s.field("matches", if same { "yes" } else { "no" });
        if !same {
            flags.push(Flag::new("one-parameter group", &g, reference::GROUPS[i], "componentwise comparison"));
        }
    }
    report.push(s);

    let mut s = Section::new("invariants");
    let invs = invariants(space, &v)?;
    if let Some(bad) = invs.iter().find(|i| !i.is_annihilated_by(&v)) {
        return Err(CliError::internal(format!("invariant {bad} is not annihilated by the field")));
    }
    let shown: Vec<String> = invs.iter().map(|i| i.to_string()).collect();
    s.list("functions", &shown);
    s.field("annihilated", "all");
    if let Some(i) = index {
        let mut a = shown.clone();
        let mut b: Vec<String> = reference::INVARIANTS[i].iter().map(|s| s.to_string()).collect();
        a.sort();
        b.sort();
        s.field("published", reference::INVARIANTS[i].join(", "));
        s.field("matches", if a == b { "yes" } else { "no" });
        if a != b {
            flags.push(Flag::new("invariants", shown.join(", "), reference::INVARIANTS[i].join(", "), "set comparison"));
        }
    }
    report.push(s);

    let names = solution_names(space.dependents().len());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let form = SolutionForm::generic(space, &refs)?;
    let t = transform_solution(space, &g, &form)?;
    let mut s = Section::new("transformed");
    let inputs: Vec<String> = form.components.iter().map(|c| c.to_string()).collect();
    s.field("solution", inputs.join(", "));
    let shown: Vec<String> = t.components.iter().map(|c| c.to_string()).collect();
    s.list("components", &shown);
    if let Some(i) = index {
        let opposite = transform_solution(space, &g.at(&(-Expr::symbol(&eps)))?, &form)?;
        let mut rows = Vec::new();
        for (k, cell) in shown.iter().enumerate() {
            let published = reference::TRANSFORMED[i][k];
            if cell == published {
                rows.push(format!("{cell}: matches"));
                continue;
            }
            let flipped = opposite.components[k].to_string() == published;
            rows.push(format!("{cell}: published {published}"));
            let note = if flipped {
                "the published cell follows the opposite sign of the group parameter; the other published columns \
                 follow the sign used here, so no single convention reproduces every cell"
            } else {
                "the published cell is not reproduced under either sign of the group parameter"
            };
            flags.push(Flag::new("transformed solution", cell, published, note));
        }
        s.list("published", &rows);
    }
    report.push(s);

    if index.is_some() {
        report.push(discrepancies(&flags));
    }
    Ok(report)
}
