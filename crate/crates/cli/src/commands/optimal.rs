use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::{json, Value};

use liesym::expr::{Atom, Expr, Symbol};
use liesym::liealg::{
    classify_1d, is_extension_unknown, is_subalgebra, normalize_1d, solve_pair_condition, solve_triple_condition,
    AlgebraVector, ExtensionCase, ExtensionConditions, LieAlgebra, Normalized, OneDimClass, SubalgebraCheck, Verdict,
};
use liesym::{q, Rational};

use super::{discrepancies, field_algebra, Flag};
use crate::reference;
use crate::report::{Report, Section};
use crate::{load_problem, CliError, CliResult};

fn span_text(vs: &[AlgebraVector], labels: &[String]) -> String {
    let items: Vec<String> = vs.iter().map(|v| v.display_with(labels)).collect();
    format!("⟨{}⟩", items.join(", "))
}

fn verdict_text(c: &SubalgebraCheck) -> String {
    let v = match &c.verdict {
        Verdict::Closed => "closed".to_string(),
        Verdict::NotClosed => "not closed".to_string(),
        Verdict::ClosedUnder(conds) => {
            let cs: Vec<String> = conds.iter().map(|e| format!("{e} = 0")).collect();
            format!("closed when {}", cs.join(", "))
        }
    };
    if c.generically_independent() {
        v
    } else {
        format!("{v}, but the generators are dependent")
    }
}

fn independence_text(c: &SubalgebraCheck) -> String {
    if c.independence.iter().any(Expr::is_constant) {
        return "always".into();
    }
    let ms: Vec<String> = c.independence.iter().map(|e| e.to_string()).collect();
    format!("one of {} nonzero", ms.join(", "))
}

fn rationals_text(v: &[Rational]) -> String {
    let items: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", items.join(", "))
}

fn transcript_text(n: &Normalized, labels: &[String]) -> String {
    let mut steps: Vec<String> = n
        .moves
        .iter()
        .map(|m| {
            let l = &labels[m.generator];
            match m.epsilon.to_string().as_str() {
                "1" => format!("Ad(exp({l}))"),
                "-1" => format!("Ad(exp(-{l}))"),
                e => format!("Ad(exp({e}*{l}))"),
            }
        })
        .collect();
    if n.scale != q(1) {
        steps.push(format!("scale {}", n.scale));
    }
    if steps.is_empty() {
        steps.push("already normal".into());
    }
    format!("{} -> {}: {}", rationals_text(&n.input), rationals_text(&n.result), steps.join(", "))
}

fn param(name: &str) -> Expr {
    Expr::symbol(&Symbol::parameter(name))
}

/// A class representative with `b_j` in place of the free coefficients.
fn representative(c: &OneDimClass, n: usize) -> AlgebraVector {
    AlgebraVector::new(
        (0..n)
            .map(|k| {
                if k == c.top {
                    Expr::one()
                } else if c.support.contains(&k) {
                    param(&format!("b{}", k + 1))
                } else {
                    Expr::zero()
                }
            })
            .collect(),
    )
}

fn support(vs: &[AlgebraVector]) -> BTreeSet<usize> {
    vs.iter()
        .flat_map(|v| (0..v.len()).filter(|&k| !v.coords[k].is_zero()))
        .collect()
}

/// Coordinates that are nonzero in every member of the family.
fn required(vs: &[AlgebraVector]) -> BTreeSet<usize> {
    vs.iter()
        .flat_map(|v| (0..v.len()).filter(|&k| v.coords[k].as_constant().is_some_and(|c| c != q(0))))
        .collect()
}

/// Whether no member of `family` can span the same space as `s`.
fn outside_family(s: &[AlgebraVector], family: &[AlgebraVector]) -> bool {
    !required(family).is_subset(&support(s))
}

/// Binds lone extension unknowns in `cand` so that it equals `target`.
fn unify(cand: &AlgebraVector, target: &AlgebraVector) -> Option<BTreeMap<Atom, Expr>> {
    let mut b: BTreeMap<Atom, Expr> = BTreeMap::new();
    for (c, t) in cand.coords.iter().zip(&target.coords) {
        let atoms = c.atoms();
        if atoms.len() == 1 {
            let a = atoms.iter().next().expect("one atom");
            if is_extension_unknown(a) && *c == Expr::atom(a.clone()) {
                if b.get(a).is_some_and(|old| old != t) {
                    return None;
                }
                b.insert(a.clone(), t.clone());
            }
        }
    }
    let bound = cand.map(|e| e.substitute(&b)).ok()?;
    (bound == *target).then_some(b)
}

fn bindings_text(b: &BTreeMap<Atom, Expr>) -> String {
    let items: Vec<String> = b.iter().map(|(a, e)| format!("{a} = {e}")).collect();
    items.join(", ")
}

fn case_lines(c: &ExtensionCase, labels: &[String]) -> (Vec<String>, Value) {
    let mut lines = vec![format!("top {}: candidate {}", labels[c.top], c.candidate.display_with(labels))];
    let forced: Vec<String> = c.forced.iter().map(|a| format!("{a} = 0")).collect();
    if !forced.is_empty() {
        lines.push(format!("  forced: {}", forced.join(", ")));
    }
    let conds: Vec<String> = c.conditions.iter().map(|e| format!("{e} = 0")).collect();
    if !conds.is_empty() {
        lines.push(format!("  remaining conditions: {}", conds.join(", ")));
    }
    let moves: Vec<String> = c
        .moves
        .iter()
        .map(|(i, e)| format!("Ad(exp(eps*{})) with eps = {e}", labels[*i]))
        .collect();
    if !moves.is_empty() {
        lines.push(format!("  moves: {}", moves.join(", ")));
    }
    let status = if !c.feasible {
        "infeasible".to_string()
    } else if c.closes() {
        format!("subalgebra {}", span_text(&c.subalgebra(), labels))
    } else {
        "closes under the remaining conditions".to_string()
    };
    lines.push(format!("  {status}"));
    let json = json!({
        "top": labels[c.top],
        "candidate": c.candidate.display_with(labels),
        "forced": forced,
        "conditions": conds,
        "moves": moves,
        "status": status,
    });
    (lines, json)
}

fn conditions_block(s: &mut Section, title: &str, sol: &ExtensionConditions, labels: &[String]) -> Value {
    s.line(format!("{title} = {}", span_text(&sol.fixed, labels)));
    s.line(format!("  generic candidate: {}", sol.generic.display_with(labels)));
    let cons: Vec<String> = sol.constraints.iter().map(|e| format!("{e} = 0")).collect();
    if cons.is_empty() {
        s.line("  constraints: none");
    } else {
        s.line("  constraints:");
        for c in &cons {
            s.line(format!("    {c}"));
        }
    }
    let mut cases = Vec::new();
    for c in &sol.cases {
        let (lines, j) = case_lines(c, labels);
        for l in lines {
            s.line(format!("  {l}"));
        }
        cases.push(j);
    }
    json!({
        "fixed": span_text(&sol.fixed, labels),
        "generic": sol.generic.display_with(labels),
        "constraints": cons,
        "cases": cases,
    })
}

fn closure_block(s: &mut Section, entries: &[Vec<AlgebraVector>], g: &LieAlgebra, flags: &mut Vec<Flag>) -> Vec<Value> {
    let labels = g.labels();
    let mut out = Vec::new();
    for e in entries {
        let c = is_subalgebra(g, e);
        let span = span_text(e, labels);
        let verdict = verdict_text(&c);
        let indep = independence_text(&c);
        s.line(format!("{span}: {verdict}; independent: {indep}"));
        out.push(json!({"subalgebra": span, "verdict": verdict, "independent": indep}));
        if c.verdict != Verdict::Closed || !c.generically_independent() {
            flags.push(Flag::new("published subalgebra", &verdict, &span, "the listed generators do not span a subalgebra"));
        }
    }
    out
}

/// Finds a closing case reproducing `target` from the fixed generators.
fn reproduce(
    sols: &[ExtensionConditions],
    fixed: &[AlgebraVector],
    rest: &AlgebraVector,
) -> Option<(usize, usize, BTreeMap<Atom, Expr>)> {
    for (si, sol) in sols.iter().enumerate() {
        for (ci, c) in sol.cases.iter().enumerate() {
            if !c.closes() || c.fixed.len() != fixed.len() || !c.fixed.iter().all(|f| fixed.contains(f)) {
                continue;
            }
            if let Some(b) = unify(&c.candidate, rest) {
                return Some((si, ci, b));
            }
        }
    }
    None
}

fn grid(n: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    let vals: Vec<Rational> = (lo..=hi).map(q).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn dim1(report: &mut Report, g: &LieAlgebra, reference: bool, flags: &mut Vec<Flag>) -> CliResult<()> {
    let labels = g.labels().to_vec();
    let n = g.dim();
    let classes = classify_1d(g, &[q(-1), q(0), q(1)])?;
    let mut s = Section::new("classes");
    let shown: Vec<String> = classes.iter().map(|c| c.display_with(&labels)).collect();
    s.list("normal_forms", &shown);
    report.push(s);

    let mut s = Section::new("transcripts");
    let mut samples: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|k| q((k == i) as i64)).collect()).collect();
    samples.push((0..n).map(|_| q(1)).collect());
    samples.push((1..=n as i64).map(q).collect());
    samples.push((0..n).map(|k| q([2, -1, 3, 5][k % 4])).collect());
    let mut lines = Vec::new();
    for x in &samples {
        let t = normalize_1d(g, x)?;
        if t.replay(g)? != t.result {
            return Err(CliError::internal(format!("transcript for {} does not replay", rationals_text(x))));
        }
        lines.push(transcript_text(&t, &labels));
    }
    s.list("samples", &lines);
    report.push(s);

    if reference {
        let mut s = Section::new("published");
        let published: Vec<BTreeSet<usize>> = vec![[0, 1].into(), [0, 1, 2].into()];
        let mut rows = Vec::new();
        for c in &classes {
            let cover = published.iter().position(|p| c.support.is_subset(p) && p.contains(&c.top));
            let text = match cover {
                Some(i) => format!("{}: within X{} = {}", c.display_with(&labels), i + 1, reference::ONE_DIM[i]),
                None => {
                    flags.push(Flag::new(
                        "one-dimensional classes",
                        c.display_with(&labels),
                        reference::ONE_DIM.join("; "),
                        "a class with nonzero v4 coordinate is missing from the published list",
                    ));
                    format!("{}: not in the published list", c.display_with(&labels))
                }
            };
            rows.push(text);
        }
        s.list("coverage", &rows);
        let mut checked = 0usize;
        let mut failures = Vec::new();
        for x in grid(4, -2, 2) {
            if x[3] == q(0) {
                continue;
            }
            checked += 1;
            let r = normalize_1d(g, &x)?;
            if r.result[2] != q(0) {
                failures.push(rationals_text(&x));
            }
        }
        s.field(
            "nonzero_v4_grid",
            format!("{checked} vectors with nonzero v4 coordinate on the grid {{-2..2}}^4, {} keep a v3 coordinate", failures.len()),
        );
        if !failures.is_empty() {
            return Err(CliError::internal(format!("v3 coordinate survives for {}", failures.join(", "))));
        }
        report.push(s);
    }
    Ok(())
}

fn dim2(report: &mut Report, g: &LieAlgebra, reference: bool, flags: &mut Vec<Flag>) -> CliResult<()> {
    let labels = g.labels().to_vec();
    let n = g.dim();
    let classes = classify_1d(g, &[q(-1), q(0), q(1)])?;
    let mut firsts: Vec<AlgebraVector> = Vec::new();
    if reference {
        firsts.push(reference::two_dim()[0][0].clone());
    }
    for c in &classes {
        let r = representative(c, n);
        if !firsts.contains(&r) {
            firsts.push(r);
        }
    }

    let mut published = Vec::new();
    if reference {
        let mut s = Section::new("published_classes");
        let classes = reference::two_dim();
        published = closure_block(&mut s, &classes, g, flags);
        let c1 = is_subalgebra(g, &classes[0]);
        let minors: Vec<String> = c1.independence.iter().map(|e| format!("{e} ≠ 0")).collect();
        s.field("class_1_printed_condition", reference::CLASS1_CONDITION);
        s.field("class_1_computed_condition", format!("any of {}", minors.join(", ")));
        let printed = "b1*b3 - b2*b4";
        if !c1.independence.iter().any(|e| e.to_string() == printed || (-e).to_string() == printed) {
            flags.push(Flag::new(
                "independence condition of class 1",
                minors.join(", "),
                reference::CLASS1_CONDITION,
                "the printed product is not a minor of the generator matrix; the (v1, v2) minor is b1*b4 - b2*b3, \
                 and independence already follows from (b1, b2) ≠ 0",
            ));
        }
        s.field("class_2_printed_condition", reference::CLASS2_CONDITION);
        report.push(s);
    }

    let mut s = Section::new("pair_conditions");
    let mut sols = Vec::new();
    let mut blocks = Vec::new();
    for (i, x1) in firsts.iter().enumerate() {
        let sol = solve_pair_condition(g, x1)?;
        blocks.push(conditions_block(&mut s, &format!("S{}", i + 1), &sol, &labels));
        sols.push(sol);
    }
    s.set("solutions", blocks);
    report.push(s);

    if reference {
        let mut s = Section::new("reproduction");
        let mut rows = Vec::new();
        for (i, class) in reference::two_dim().iter().enumerate() {
            let line = match reproduce(&sols, &class[..1], &class[1]) {
                Some((si, ci, b)) => {
                    let c = &sols[si].cases[ci];
                    let special = b.values().any(Expr::is_constant);
                    let mut t = format!(
                        "class {}: S{} case top {} with {}",
                        i + 1,
                        si + 1,
                        labels[c.top],
                        bindings_text(&b)
                    );
                    if special {
                        t.push_str(" (a specialization of the computed family)");
                        flags.push(Flag::new(
                            &format!("two-dimensional class {}", i + 1),
                            span_text(&c.subalgebra(), &labels),
                            span_text(class, &labels),
                            "the published class fixes free coefficients that the computed family keeps",
                        ));
                    }
                    t
                }
                None => {
                    flags.push(Flag::new(
                        &format!("two-dimensional class {}", i + 1),
                        "not reproduced",
                        span_text(class, &labels),
                        "no closing case of the pair conditions reproduces the class",
                    ));
                    format!("class {}: not reproduced", i + 1)
                }
            };
            rows.push(line);
        }
        let family = reference::two_dim();
        let mut extra = Vec::new();
        for sol in &sols {
            for c in sol.cases.iter().filter(|c| c.closes()) {
                let sub = c.subalgebra();
                if family.iter().all(|f| outside_family(&sub, f)) {
                    let t = span_text(&sub, &labels);
                    if !extra.contains(&t) {
                        extra.push(t);
                    }
                }
            }
        }
        for e in &extra {
            flags.push(Flag::new(
                "two-dimensional subalgebras",
                e,
                "no published class contains it",
                "a closing case of the pair conditions lies outside every published class",
            ));
        }
        s.list("classes", &rows);
        s.list("outside_published_classes", &extra);
        s.set("published_checks", published);
        report.push(s);
    }
    Ok(())
}

fn dim3(report: &mut Report, g: &LieAlgebra, reference: bool, flags: &mut Vec<Flag>) -> CliResult<()> {
    let labels = g.labels().to_vec();
    let n = g.dim();
    let e = |i: usize| AlgebraVector::basis(n, i);
    let mut pairs: Vec<[AlgebraVector; 2]> = Vec::new();
    if reference {
        s_published_triples(report, g, flags)?;
        for c in reference::two_dim() {
            pairs.push([c[0].clone(), c[1].clone()]);
        }
        pairs.push([e(0), e(1)]);
    } else {
        for i in 0..n {
            for j in i + 1..n {
                if is_subalgebra(g, &[e(i), e(j)]).verdict == Verdict::Closed {
                    pairs.push([e(i), e(j)]);
                }
            }
        }
    }

    let mut s = Section::new("triple_conditions");
    let mut sols = Vec::new();
    let mut blocks = Vec::new();
    for (i, [y1, y2]) in pairs.iter().enumerate() {
        match solve_triple_condition(g, y1, y2) {
            Ok(sol) => {
                blocks.push(conditions_block(&mut s, &format!("Y{}", i + 1), &sol, &labels));
                sols.push(sol);
            }
            Err(liesym::Error::NotSupported(m)) => {
                s.line(format!("Y{} = {}: not supported: {m}", i + 1, span_text(&[y1.clone(), y2.clone()], &labels)));
            }
            Err(err) => return Err(err.into()),
        }
    }
    s.set("solutions", blocks);
    report.push(s);

    if reference {
        let mut s = Section::new("reproduction");
        let mut rows = Vec::new();
        for t in reference::THREE_DIM {
            let vs: Vec<AlgebraVector> = t.iter().map(|&i| e(i)).collect();
            let span = span_text(&vs, &labels);
            let mut found = None;
            for k in (0..3).rev() {
                let fixed: Vec<AlgebraVector> = (0..3).filter(|&m| m != k).map(|m| vs[m].clone()).collect();
                if let Some(hit) = reproduce(&sols, &fixed, &vs[k]) {
                    found = Some(hit);
                    break;
                }
            }
            let line = match found {
                Some((si, ci, b)) => {
                    let c = &sols[si].cases[ci];
                    let mut t = format!("{span}: Y{} case top {}", si + 1, labels[c.top]);
                    if !b.is_empty() {
                        t.push_str(&format!(" with {}", bindings_text(&b)));
                    }
                    t
                }
                None => {
                    flags.push(Flag::new(
                        "three-dimensional subalgebra",
                        "not reproduced",
                        &span,
                        "no closing case of the triple conditions reproduces it",
                    ));
                    format!("{span}: not reproduced")
                }
            };
            rows.push(line);
        }
        s.list("triples", &rows);
        report.push(s);
    }
    Ok(())
}

fn s_published_triples(report: &mut Report, g: &LieAlgebra, flags: &mut Vec<Flag>) -> CliResult<()> {
    let mut s = Section::new("published_triples");
    let triples: Vec<Vec<AlgebraVector>> = reference::THREE_DIM
        .iter()
        .map(|t| t.iter().map(|&i| AlgebraVector::basis(4, i)).collect())
        .collect();
    let checks = closure_block(&mut s, &triples, g, flags);
    s.set("triples", checks);
    report.push(s);

    let mut s = Section::new("published_table");
    let mut rows = serde_json::Map::new();
    for (dim, entries) in reference::table() {
        s.line(format!("dimension {dim}:"));
        let checks = closure_block(&mut s, &entries, g, flags);
        rows.insert(dim.to_string(), Value::Array(checks));
    }
    s.field(
        "reading",
        "the third three-dimensional entry is printed as v1, v3, v3 and checked as v1, v3, v4",
    );
    s.set("entries", Value::Object(rows));
    report.push(s);
    flags.push(Flag::new(
        "optimal-system table entry",
        "⟨v1, v3, v4⟩",
        "v1, v3, v3",
        "a repeated generator cannot span a three-dimensional subalgebra; read as the triple with v4 from the published triple list",
    ));
    Ok(())
}

pub fn optimal(path: &Path, dim: u32) -> CliResult<Report> {
    let (problem, input) = load_problem(path)?;
    let fa = field_algebra(&problem)?;
    let mut report = Report::new("optimal", Some(input));
    report.option("dim", dim);
    let mut flags = Vec::new();
    match dim {
        1 => dim1(&mut report, &fa.g, fa.reference, &mut flags)?,
        2 => dim2(&mut report, &fa.g, fa.reference, &mut flags)?,
        3 => dim3(&mut report, &fa.g, fa.reference, &mut flags)?,
        _ => return Err(CliError::input(format!("--dim must be 1, 2 or 3, not {dim}"))),
    }
    if fa.reference {
        report.push(discrepancies(&flags));
    }
    Ok(report)
}
