use std::path::Path;

use serde_json::json;

use liesym::detsys::{
    generic_determining_system, numeric_point_oracle, same_span, solve_determining, verify_symmetry, GenericAnsatz,
    SymmetryBasis,
};
use liesym::dsl::Problem;
use liesym::expr::{Expr, Symbol};
use liesym::vfield::VectorField;

use super::{default_labels, discrepancies, Flag};
use crate::reference;
use crate::report::{Report, Section};
use crate::{load_problem, CliError, CliResult};

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `sum_i C_i v_i`, one expression per base coordinate.
fn general_solution(problem: &Problem, ansatz: &GenericAnsatz, basis: &SymmetryBasis) -> Vec<(String, Expr)> {
    let mut general = VectorField::zero();
    for (i, v) in basis.fields.iter().enumerate() {
        let c = Expr::symbol(&Symbol::parameter(&format!("C{}", i + 1)));
        general = general.add(&v.scale(&c));
    }
    problem
        .space()
        .base_coordinates()
        .iter()
        .map(|z| {
            let name = ansatz.function_for(z).map(|f| f.name().to_string()).unwrap_or_else(|| z.to_string());
            (name, general.component(z))
        })
        .collect()
}

pub fn symmetries(path: &Path, degree: Option<u32>) -> CliResult<Report> {
    let (problem, input) = load_problem(path)?;
    let system = problem.system()?;
    let d = degree.unwrap_or(problem.ansatz_degree);
    let mut report = Report::new("symmetries", Some(input));
    report.option("degree", d);

    let (ansatz, det) = generic_determining_system(&system)?;
    let basis = solve_determining(&system, d)?;
    for (i, v) in basis.fields.iter().enumerate() {
        if !verify_symmetry(&system, v)?.passed() {
            return Err(CliError::internal(format!(
                "computed generator {} fails the invariance condition",
                i + 1
            )));
        }
    }
    let space = problem.space();
    let reference = reference::applies_to(space);
    let mut flags = Vec::new();

    let mut s = Section::new("determining");
    s.field("equations", det.len());
    if reference {
        s.field("published_equations", reference::DETERMINING_EQUATIONS);
        s.field("count_matches", yes_no(det.len() == reference::DETERMINING_EQUATIONS));
    }
    let functions: Vec<String> = ansatz
        .functions
        .iter()
        .map(|(z, f)| format!("{f} (coefficient of ∂_{z})"))
        .collect();
    s.list("unknown_functions", &functions);
    s.field("ansatz_degree", d);
    s.field("linear_equations", basis.stats.linear_equations);
    s.field("ansatz_unknowns", basis.stats.unknowns);
    s.field("rank", basis.stats.rank);
    s.field("nullity", basis.stats.nullity);
    report.push(s);
    if reference && det.len() != reference::DETERMINING_EQUATIONS {
        flags.push(Flag::new(
            "number of determining equations",
            det.len(),
            reference::DETERMINING_EQUATIONS,
            "informational; counts depend on how duplicate and proportional equations are merged",
        ));
    }

    let mut s = Section::new("basis");
    s.field("dimension", basis.fields.len());
    let labels = default_labels(basis.fields.len());
    let mut rows = Vec::new();
    for (l, v) in labels.iter().zip(&basis.fields) {
        let shown = v.display_in(space);
        let dsl = v.to_dsl(space);
        s.line(format!("{l} = {shown}    # vfield {l} = {dsl};"));
        rows.push(json!({"name": l, "field": shown, "dsl": dsl}));
    }
    s.set("fields", rows);
    if reference {
        s.field("published_span", if same_span(&basis.fields, &reference::generators()) { "equal" } else { "different" });
    }
    if !problem.vfields.is_empty() {
        let declared: Vec<VectorField> = problem.vfields.iter().map(|(_, v)| v.clone()).collect();
        s.field("declared_span", if same_span(&basis.fields, &declared) { "equal" } else { "different" });
    }
    report.push(s);

    let general = general_solution(&problem, &ansatz, &basis);
    let mut s = Section::new("general_solution");
    let items: Vec<String> = general.iter().map(|(n, e)| format!("{n} = {e}")).collect();
    s.list("coefficients", &items);
    report.push(s);
    if reference {
        for ((name, e), (pname, printed)) in general.iter().zip(reference::COEFFICIENTS) {
            let computed = e.to_string();
            if name == pname && computed != printed {
                flags.push(Flag::new(
                    &format!("coefficient {name}"),
                    &computed,
                    printed,
                    "the printed coefficient list disagrees with the printed basis; the basis is reproduced",
                ));
            }
        }
    }

    if reference {
        let mut s = Section::new("spot_checks");
        let dets: Vec<Expr> = det.equations.iter().map(Expr::primitive).collect();
        let mut rows = Vec::new();
        for (printed, e) in reference::printed_determining() {
            let values = basis
                .fields
                .iter()
                .map(|v| ansatz.evaluate_on(&e, v))
                .collect::<Result<Vec<_>, _>>()?;
            let vanish = values.iter().all(Expr::is_zero);
            let p = e.primitive();
            let listed = dets.iter().any(|d| *d == p || *d == -&p);
            s.line(format!("{printed}"));
            s.line(format!("  vanishes on the basis: {}", yes_no(vanish)));
            s.line(format!("  generated verbatim: {}", yes_no(listed)));
            rows.push(json!({"equation": printed, "vanishes": yes_no(vanish), "generated": yes_no(listed)}));
            if !vanish {
                return Err(CliError::internal(format!("published equation {printed} fails on the computed basis")));
            }
        }
        s.set("equations", rows);
        report.push(s);
        report.push(discrepancies(&flags));
    }
    Ok(report)
}

pub fn verify(path: &Path, names: &[String], oracle: Option<usize>) -> CliResult<Report> {
    let (problem, input) = load_problem(path)?;
    let system = problem.system()?;
    let names: Vec<String> = if names.is_empty() {
        problem.vfields.iter().map(|(n, _)| n.clone()).collect()
    } else {
        names.to_vec()
    };
    if names.is_empty() {
        return Err(CliError::input("no fields to verify: the file declares none and no --vfield was given"));
    }
    let mut report = Report::new("verify", Some(input));
    report.option("vfield", names.join(","));
    if let Some(n) = oracle {
        report.option("oracle", n);
    }
    let space = problem.space();
    let mut s = Section::new("verify");
    let mut rows = Vec::new();
    for name in &names {
        let v = problem
            .field(name)
            .map_err(|e| CliError::input(format!("unknown field `{name}`: {e}")))?;
        let ver = verify_symmetry(&system, &v)?;
        let verdict = if ver.passed() { "pass" } else { "fail" };
        s.line(format!("{name} = {}: {verdict}", v.display_in(space)));
        let mut residuals = Vec::new();
        for (i, r) in ver.residuals.iter().enumerate() {
            if !r.is_zero() {
                s.line(format!("  residual of equation {}: {r}", i + 1));
                residuals.push(json!({"equation": (i + 1).to_string(), "residual": r.to_string()}));
            }
        }
        let mut row = json!({
            "name": name,
            "field": v.display_in(space),
            "verdict": verdict,
            "residuals": residuals,
        });
        if let Some(n) = oracle {
            let numeric = if numeric_point_oracle(&system, &v, n)? { "pass" } else { "fail" };
            if numeric != verdict {
                return Err(CliError::internal(format!(
                    "numeric oracle ({numeric}) disagrees with the symbolic verdict ({verdict}) for {name}"
                )));
            }
            s.line(format!("  oracle ({n} points): {numeric}; agrees: yes"));
            row["oracle"] = json!({"points": n.to_string(), "verdict": numeric, "agrees": "yes"});
        }
        rows.push(row);
    }
    s.set("fields", rows);
    report.push(s);
    Ok(report)
}
