//! Mutated copies of the shipped fixture must be rejected at the mutation.

use liesym::dsl::parse;
use liesym::ParseError;
use proptest::prelude::*;

const FIXTURE: &str = include_str!("../../../fixtures/stagnation.pde");

fn offset_of(src: &str, e: &ParseError) -> usize {
    let start: usize = src.split_inclusive('\n').take(e.line - 1).map(str::len).sum();
    let line = &src[start..];
    start + line.char_indices().nth(e.column - 1).map_or(line.len(), |(i, _)| i)
}

fn in_comment(src: &str, at: usize) -> bool {
    let line_start = src[..at].rfind('\n').map_or(0, |i| i + 1);
    src[line_start..at].contains('#')
}

/// Byte ranges of identifiers inside `eq` and `vfield` bodies, excluding
/// keywords and field names being defined.
fn body_identifiers(src: &str) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in src.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        let skip = if trimmed.starts_with("eq ") {
            Some(body.len() - trimmed.len() + 3)
        } else if trimmed.starts_with("vfield ") {
            body.find('=').map(|i| i + 1)
        } else {
            None
        };
        if let Some(from) = skip {
            let bytes = body.as_bytes();
            let mut i = from;
            while i < body.len() {
                if body[i..].starts_with("d/d") {
                    // Only the coordinate of a `d/dX` token is renamed.
                    i += 3;
                    continue;
                }
                if bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' {
                    let s = i;
                    while i < body.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    let word = &body[s..i];
                    if !matches!(word, "leading" | "D") {
                        out.push((line_start + s, line_start + i));
                    }
                } else {
                    i += 1;
                }
            }
        }
        line_start += line.len();
    }
    out
}

#[test]
fn fixture_is_valid() {
    assert!(parse(FIXTURE).is_ok());
    assert!(body_identifiers(FIXTURE).len() > 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn inserted_garbage_is_located(pos in 0usize..FIXTURE.len(), c in prop::sample::select(vec!['$', '@', '!', '?', '&', '%', '~', '.', '{'])) {
        prop_assume!(FIXTURE.is_char_boundary(pos) && !in_comment(FIXTURE, pos));
        let mut text = FIXTURE.to_string();
        text.insert(pos, c);
        let e = parse(&text).expect_err("garbage must be rejected");
        let at = offset_of(&text, &e);
        // A `.` directly after digits is reported as a decimal at the dot.
        prop_assert_eq!(at, pos, "{} for {:?} at {}", e, c, pos);
    }

    #[test]
    fn undeclared_names_are_located(k in any::<prop::sample::Index>(), name in "[W-Z][a-z]{0,2}") {
        let ids = body_identifiers(FIXTURE);
        let (s, t) = ids[k.index(ids.len())];
        let mut text = FIXTURE.to_string();
        text.replace_range(s..t, &name);
        let e = parse(&text).expect_err("undeclared name must be rejected");
        let at = offset_of(&text, &e);
        prop_assert!(at >= s && at < s + name.len(), "{} for {} at {}..{}", e, name, s, t);
        prop_assert!(!e.hint.is_empty());
    }

    #[test]
    fn dropped_operators_are_located(k in any::<prop::sample::Index>()) {
        // Deleting a binary operator leaves two adjacent operands, or one
        // merged identifier; the diagnostic belongs on the merged token or on
        // the second operand.
        let ops: Vec<usize> = FIXTURE
            .char_indices()
            .filter(|&(i, c)| (c == '+' || c == '*') && !in_comment(FIXTURE, i))
            .map(|(i, _)| i)
            .collect();
        let i = ops[k.index(ops.len())];
        let mut text = FIXTURE.to_string();
        text.remove(i);
        let e = parse(&text).expect_err("missing operator must be rejected");
        let at = offset_of(&text, &e);
        let next = i + text[i..].len() - text[i..].trim_start().len();
        let word = text[..i].trim_end_matches(|c: char| c.is_ascii_alphanumeric() || c == '_').len();
        prop_assert!(at == next || (at == word && word < i), "{} at {}", e, i);
    }
}
