//! Constraint-mode input: named variables and nogoods over them.
//!
//! ```text
//! % comment
//! vars: a b p q
//! nogood: T a
//! nogood: F a, T b
//! decide: F p
//! ```
//!
//! Variables must be declared before use. Nogoods are registered in file
//! order, which fixes the registration-index tie-breaks of the heuristics.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lit::{Lit, Var};

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `T name` or `F name` against the declared names.
pub fn parse_literal(text: &str, names: &[String], line: usize) -> Result<Lit> {
    let malformed = || Error::MalformedLiteral {
        line,
        text: text.trim().to_string(),
    };
    let mut parts = text.split_whitespace();
    let sign = match parts.next() {
        Some("T") => true,
        Some("F") => false,
        _ => return Err(malformed()),
    };
    let name = parts.next().ok_or_else(malformed)?;
    if parts.next().is_some() || !valid_name(name) {
        return Err(malformed());
    }
    let v = names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::UndeclaredVariable {
            line,
            name: name.to_string(),
        })?;
    Ok(Lit::new(Var(v as u32), sign))
}

/// Parses a comma-separated literal list; an empty list is allowed.
pub fn parse_literal_list(text: &str, names: &[String], line: usize) -> Result<Vec<Lit>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| parse_literal(t, names, line)).collect()
}

pub fn parse_nogood_file(source: &str) -> Result<Instance> {
    let mut names: Vec<String> = Vec::new();
    let mut nogoods = Vec::new();
    let mut script = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('%').next().unwrap().trim();
        if text.is_empty() {
            continue;
        }
        let (key, rest) = text.split_once(':').ok_or_else(|| Error::Syntax {
            line,
            column: 1,
            message: "expected `vars:`, `nogood:` or `decide:`".into(),
        })?;
        match key.trim() {
            "vars" => {
                for name in rest.split_whitespace() {
                    if !valid_name(name) {
                        return Err(Error::Syntax {
                            line,
                            column: raw.find(name).map_or(1, |c| c + 1),
                            message: format!("invalid variable name `{}`", name),
                        });
                    }
                    if !names.iter().any(|n| n == name) {
                        names.push(name.to_string());
                    }
                }
            }
            "nogood" => nogoods.push(parse_literal_list(rest, &names, line)?),
            "decide" => script.push(parse_literal(rest, &names, line)?),
            other => {
                return Err(Error::Syntax {
                    line,
                    column: 1,
                    message: format!("unknown directive `{}`", other),
                })
            }
        }
    }
    Ok(Instance::from_nogoods(names, nogoods, script))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        let inst = parse_nogood_file("").unwrap();
        assert_eq!(inst.num_vars(), 0);
        assert!(inst.nogoods().is_empty());
        assert!(inst.script().is_empty());
    }

    #[test]
    fn declarations_and_script() {
        let inst = parse_nogood_file("vars: a b\n% c\nnogood: T a, F b\ndecide: F a\nnogood:\n").unwrap();
        assert_eq!(inst.names(), ["a", "b"]);
        assert_eq!(inst.nogoods()[0], vec![Var(0).t(), Var(1).f()]);
        assert!(inst.nogoods()[1].is_empty());
        assert_eq!(inst.script(), [Var(0).f()]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_nogood_file("vars: a\nnogood: T b"),
            Err(Error::UndeclaredVariable { line: 2, .. })
        ));
        assert!(matches!(
            parse_nogood_file("vars: a\nnogood: X a"),
            Err(Error::MalformedLiteral { line: 2, .. })
        ));
        assert!(matches!(
            parse_nogood_file("vars: a\nnogood: T a F a"),
            Err(Error::MalformedLiteral { .. })
        ));
        assert!(matches!(parse_nogood_file("clause: T a"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_nogood_file("nogood: T a\nvars: a"), Err(Error::UndeclaredVariable { .. })));
    }
}
