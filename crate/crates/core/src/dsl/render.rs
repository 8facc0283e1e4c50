use super::{Ast, BinOp, Param, SourceSpec};

fn prec(a: &Ast) -> u8 {
    match a {
        Ast::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Ast::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Ast::Neg(_) => 3,
        Ast::Pow(..) => 4,
        Ast::Num(_) | Ast::Var(_) | Ast::Jet(_) | Ast::Basis(_) => 5,
    }
}

fn wrap(a: &Ast, parens: bool) -> String {
    if parens {
        format!("({})", expr(a))
    } else {
        expr(a)
    }
}

/// Parenthesizes only where the parser's left-associative reading would
/// otherwise build a different tree.
pub(crate) fn expr(a: &Ast) -> String {
    match a {
        Ast::Num(n) => n.to_string(),
        Ast::Var(s) => s.clone(),
        Ast::Jet(d) => d.to_string(),
        Ast::Basis(s) => format!("d/d{s}"),
        Ast::Neg(x) => format!("-{}", wrap(x, prec(x) < 3)),
        Ast::Pow(x, k) => format!("{}^{k}", wrap(x, prec(x) < 5)),
        Ast::Bin(op, l, r) => {
            let p = prec(a);
            let sym = match op {
                BinOp::Add => " + ",
                BinOp::Sub => " - ",
                BinOp::Mul => " * ",
                BinOp::Div => " / ",
            };
            format!("{}{sym}{}", wrap(l, prec(l) < p), wrap(r, prec(r) <= p))
        }
    }
}

fn params(out: &mut String, ps: &[Param]) {
    let mut i = 0;
    while i < ps.len() {
        let flag = ps[i].nonzero;
        let mut j = i;
        while j < ps.len() && ps[j].nonzero == flag {
            j += 1;
        }
        let names: Vec<&str> = ps[i..j].iter().map(|p| p.name.as_str()).collect();
        out.push_str(&format!("param {}{};\n", names.join(" "), if flag { " nonzero" } else { "" }));
        i = j;
    }
}

pub(crate) fn source(spec: &SourceSpec) -> String {
    let mut out = String::new();
    if !spec.independents.is_empty() {
        out.push_str(&format!("independent {};\n", spec.independents.join(" ")));
    }
    if !spec.dependents.is_empty() {
        out.push_str(&format!("dependent {};\n", spec.dependents.join(" ")));
    }
    params(&mut out, &spec.parameters);
    if !spec.equations.is_empty() {
        out.push('\n');
    }
    for e in &spec.equations {
        out.push_str(&format!("eq {} = {}", expr(&e.lhs), expr(&e.rhs)));
        if let Some(d) = &e.leading {
            out.push_str(&format!(" leading {d}"));
        }
        out.push_str(";\n");
    }
    if !spec.vfields.is_empty() {
        out.push('\n');
    }
    for v in &spec.vfields {
        out.push_str(&format!("vfield {} = {};\n", v.name, expr(&v.body)));
    }
    let o = &spec.options;
    if o.ansatz_degree.is_some() || o.prolong_order.is_some() {
        out.push('\n');
    }
    if let Some(d) = o.ansatz_degree {
        out.push_str(&format!("option ansatz_degree {d};\n"));
    }
    if let Some(d) = o.prolong_order {
        out.push_str(&format!("option prolong_order {d};\n"));
    }
    out
}
