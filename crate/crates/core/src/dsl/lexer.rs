use num_bigint::BigInt;

use crate::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokKind {
    Ident(String),
    Int(BigInt),
    /// `d/dX`
    Basis(String),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Tok {
    pub kind: TokKind,
    pub start: usize,
    pub end: usize,
}

/// 1-based line and column (in characters) of a byte offset.
pub(crate) fn location(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

pub(crate) fn error(src: &str, offset: usize, message: impl Into<String>, hint: impl Into<String>) -> ParseError {
    let (line, column) = location(src, offset);
    ParseError {
        line,
        column,
        message: message.into(),
        hint: hint.into(),
    }
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

const PUNCT: &str = "+-*/^(),;=[]";

pub(crate) fn lex(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c == '#' {
            while it.peek().is_some_and(|&(_, c)| c != '\n') {
                it.next();
            }
            continue;
        }
        if ident_start(c) {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if !ident_char(c) {
                    break;
                }
                end = j + c.len_utf8();
                it.next();
            }
            let word = &src[i..end];
            let rest = &src[end..];
            if word == "d" && rest.starts_with("/d") && rest[2..].chars().next().is_some_and(ident_start) {
                let name: String = rest[2..].chars().take_while(|&c| ident_char(c)).collect();
                let stop = end + 2 + name.len();
                while it.peek().is_some_and(|&(j, _)| j < stop) {
                    it.next();
                }
                out.push(Tok {
                    kind: TokKind::Basis(name),
                    start: i,
                    end: stop,
                });
            } else {
                out.push(Tok {
                    kind: TokKind::Ident(word.to_string()),
                    start: i,
                    end,
                });
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, c)) = it.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                it.next();
            }
            match it.peek() {
                Some(&(j, c)) if ident_char(c) => {
                    return Err(error(src, j, "malformed number", "put `*` between a number and a name"));
                }
                Some(&(j, '.')) => {
                    return Err(error(
                        src,
                        j,
                        "decimal literals are not supported",
                        "write rationals as fractions such as 1/2",
                    ));
                }
                _ => {}
            }
            let n: BigInt = src[i..end].parse().expect("ascii digits");
            out.push(Tok {
                kind: TokKind::Int(n),
                start: i,
                end,
            });
            continue;
        }
        if PUNCT.contains(c) {
            it.next();
            out.push(Tok {
                kind: TokKind::Punct(c),
                start: i,
                end: i + 1,
            });
            continue;
        }
        return Err(error(
            src,
            i,
            format!("unexpected character `{c}`"),
            "expressions use names, integers, + - * / ^, parentheses and D(...)",
        ));
    }
    out.push(Tok {
        kind: TokKind::Eof,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}
