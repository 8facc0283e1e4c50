use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;

use liesym_cli::commands::{self, AlgebraInput};
use liesym_cli::{Report, EXIT_INPUT, EXIT_UNSUPPORTED};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liesym"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|x| leaves(x, out)),
        Value::Object(m) => m.values().for_each(|x| leaves(x, out)),
        _ => {}
    }
}

fn all_reports() -> Vec<Report> {
    let f = fixture("stagnation.pde");
    let mut r = vec![
        commands::symmetries(&f, None).unwrap(),
        commands::verify(&f, &["v1".into(), "d/dU".into()], Some(5)).unwrap(),
        commands::algebra(&AlgebraInput::Problem(f.clone())).unwrap(),
    ];
    for d in 1..=3 {
        r.push(commands::optimal(&f, d).unwrap());
    }
    for v in ["v1", "v3", "v4", "v1 + v2"] {
        r.push(commands::reduce(&f, v).unwrap());
    }
    r
}

#[test]
fn json_content_appears_in_text() {
    for r in all_reports() {
        let text = r.text();
        let mut ls = Vec::new();
        leaves(&r.json()["sections"], &mut ls);
        for l in ls {
            assert!(text.contains(&l), "{}: `{l}` missing from the text report", r.command);
        }
    }
}

#[test]
fn json_parses_back() {
    for r in all_reports() {
        let v: Value = serde_json::from_str(&r.json_text()).unwrap();
        assert_eq!(v, r.json());
        let order: Vec<&str> = v["section_order"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
        let names: Vec<&str> = r.sections.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(order, names);
    }
}

#[test]
fn reruns_are_identical() {
    let a: Vec<String> = all_reports().iter().map(|r| r.text() + &r.json_text()).collect();
    let b: Vec<String> = all_reports().iter().map(|r| r.text() + &r.json_text()).collect();
    assert_eq!(a, b);
}

#[test]
fn binary_symmetries_succeeds() {
    let f = fixture("stagnation.pde");
    let (code, out, err) = run(&["symmetries", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("nullity: 4"));
    assert!(out.contains("v4 = T ∂_T"));
    let (code, out, _) = run(&["--json", "symmetries", f.to_str().unwrap(), "--degree", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sections"]["basis"]["published_span"], "equal");
    assert_eq!(v["options"]["degree"], "3");
}

#[test]
fn binary_output_is_byte_identical() {
    let f = fixture("stagnation.pde");
    let a = run(&["optimal", f.to_str().unwrap(), "--dim", "2"]);
    let b = run(&["optimal", f.to_str().unwrap(), "--dim", "2"]);
    assert_eq!(a, b);
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, out, err) = run(&["symmetries", "/nonexistent/none.pde"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(err.contains("cannot read"));
}

#[test]
fn unknown_field_is_an_input_error() {
    let f = fixture("stagnation.pde");
    let (code, _, err) = run(&["verify", f.to_str().unwrap(), "--vfield", "v7"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("v7"));
}

#[test]
fn failed_verification_still_succeeds() {
    let f = fixture("stagnation.pde");
    let (code, out, _) = run(&["verify", f.to_str().unwrap(), "--vfield", "d/dU", "--oracle", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("d/dU = ∂_U: fail"));
    assert!(out.contains("residual of equation 2"));
    assert!(out.contains("oracle (10 points): fail; agrees: yes"));
}

#[test]
fn unsupported_flow_exits_3() {
    let f = fixture("stagnation.pde");
    let (code, out, err) = run(&["reduce", f.to_str().unwrap(), "--vfield", "U * d/dx"]);
    assert_eq!(code, EXIT_UNSUPPORTED);
    assert!(out.is_empty());
    assert!(err.contains("not supported"));
}

#[test]
fn parse_errors_are_located() {
    let dir = std::env::temp_dir().join(format!("liesym-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.pde");
    std::fs::write(&p, "independent x;\ndependent u;\neq D(u,x) = w;\n").unwrap();
    let (code, _, err) = run(&["symmetries", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("bad.pde: 3:13: undeclared identifier `w`"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn non_closed_fields_are_rejected() {
    let dir = std::env::temp_dir().join(format!("liesym-cli-closure-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("open.pde");
    std::fs::write(&p, "independent x;\ndependent u;\neq D(u,x,x) = 0;\nvfield a = d/dx;\nvfield b = x^2 * d/dx;\n").unwrap();
    let (code, _, err) = run(&["algebra", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("not closed"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn algebra_needs_an_input() {
    let (code, _, _) = run(&["algebra"]);
    assert_eq!(code, EXIT_INPUT);
}

fn coeff() -> impl Strategy<Value = i64> {
    -3i64..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reports_on_random_fields_are_deterministic(a in coeff(), b in coeff(), c in coeff(), d in coeff()) {
        prop_assume!(a != 0 || b != 0 || c != 0 || d != 0);
        let field = format!("{a} * d/dx + {b} * d/dy + {c} * d/dT + {d} * T * d/dT");
        let f = fixture("stagnation.pde");
        let r1 = commands::reduce(&f, &field).unwrap();
        let r2 = commands::reduce(&f, &field).unwrap();
        prop_assert_eq!(r1.text(), r2.text());
        prop_assert_eq!(r1.json_text(), r2.json_text());
        let v1 = commands::verify(&f, std::slice::from_ref(&field), Some(3)).unwrap();
        prop_assert!(v1.text().contains(": pass"));
    }
}
