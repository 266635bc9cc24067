use super::{AtomId, Program, ProgramBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    If,
    Comma,
    Dot,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error<T>(&self, line: usize, column: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    /// Next token with its starting position, or `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        loop {
            match self.chars.peek() {
                Some('%') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let c = match self.bump() {
            None => return Ok(None),
            Some(c) => c,
        };
        let tok = match c {
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => {
                if self.chars.peek() == Some(&'-') {
                    self.bump();
                    Tok::If
                } else {
                    return self.error(line, column, "expected `:-`");
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut s = String::new();
                s.push(c);
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if !(c.is_ascii_lowercase() || c == '_') {
                    return self.error(
                        line,
                        column,
                        format!("atom `{}` must start with a lowercase letter or `_`", s),
                    );
                }
                Tok::Ident(s)
            }
            c => return self.error(line, column, format!("unexpected character `{}`", c)),
        };
        Ok(Some((tok, line, column)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(Tok, usize, usize)>>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(Tok, usize, usize)>> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().unwrap().as_ref())
    }

    fn next(&mut self) -> Result<Option<(Tok, usize, usize)>> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next(),
        }
    }

    fn eof_error<T>(&self, what: &str) -> Result<T> {
        self.lexer
            .error(self.lexer.line, self.lexer.column, format!("unexpected end of input, expected {}", what))
    }

    /// Parses `lit {, lit} .` into (positive, negative) atom lists.
    fn body(&mut self, b: &mut ProgramBuilder) -> Result<(Vec<AtomId>, Vec<AtomId>)> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        loop {
            let (tok, line, column) = match self.next()? {
                Some(t) => t,
                None => return self.eof_error("a literal"),
            };
            let name = match tok {
                Tok::Ident(s) => s,
                _ => return self.lexer.error(line, column, "expected a literal"),
            };
            if name == "not" {
                match self.next()? {
                    Some((Tok::Ident(a), l, c)) => {
                        if a == "not" {
                            return self.lexer.error(l, c, "`not` is a reserved word");
                        }
                        neg.push(b.atom(&a));
                    }
                    Some((_, l, c)) => return self.lexer.error(l, c, "expected an atom after `not`"),
                    None => return self.eof_error("an atom"),
                }
            } else {
                pos.push(b.atom(&name));
            }
            match self.next()? {
                Some((Tok::Comma, _, _)) => continue,
                Some((Tok::Dot, _, _)) => return Ok((pos, neg)),
                Some((_, l, c)) => return self.lexer.error(l, c, "expected `,` or `.`"),
                None => return self.eof_error("`.`"),
            }
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut b = ProgramBuilder::new();
        while let Some((tok, line, column)) = self.next()? {
            match tok {
                Tok::If => {
                    if let Some((Tok::Dot, _, _)) = self.peek()? {
                        self.next()?;
                        b.add_constraint_ids(&[], &[]);
                    } else {
                        let (pos, neg) = self.body(&mut b)?;
                        b.add_constraint_ids(&pos, &neg);
                    }
                }
                Tok::Ident(name) => {
                    if name == "not" {
                        return self.lexer.error(line, column, "`not` is a reserved word");
                    }
                    let head = b.atom(&name);
                    match self.next()? {
                        Some((Tok::Dot, _, _)) => b.add_rule_ids(head, &[], &[]),
                        Some((Tok::If, _, _)) => {
                            let (pos, neg) = self.body(&mut b)?;
                            b.add_rule_ids(head, &pos, &neg);
                        }
                        Some((_, l, c)) => return self.lexer.error(l, c, "expected `:-` or `.`"),
                        None => return self.eof_error("`:-` or `.`"),
                    }
                }
                _ => return self.lexer.error(line, column, "expected a rule"),
            }
        }
        Ok(b.build())
    }
}

/// Parses a ground normal program.
///
/// Grammar: `head.` | `head :- lit {, lit}.` | `:- lit {, lit}.` with
/// `lit = atom | not atom`; `%` starts a line comment.
pub fn parse_program(source: &str) -> Result<Program> {
    Parser {
        lexer: Lexer::new(source),
        peeked: None,
    }
    .program()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_pos(src: &str) -> (usize, usize) {
        match parse_program(src) {
            Err(Error::Syntax { line, column, .. }) => (line, column),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let p = parse_program("% header\n  a :-\n   b ,not   c . % trailing\nb.").unwrap();
        assert_eq!(p.rules().len(), 2);
        assert_eq!(p.num_atoms(), 3);
    }

    #[test]
    fn empty_source() {
        let p = parse_program("% nothing here\n").unwrap();
        assert_eq!(p.num_atoms(), 0);
        assert!(p.is_tight());
    }

    #[test]
    fn syntax_errors_have_positions() {
        assert_eq!(err_pos("a :- b"), (1, 7));
        assert_eq!(err_pos("a :- b.\nc :- ,"), (2, 6));
        assert_eq!(err_pos("A."), (1, 1));
        assert_eq!(err_pos("a : b."), (1, 3));
        assert_eq!(err_pos("a :- not."), (1, 9));
        assert_eq!(err_pos("a b."), (1, 3));
        assert_eq!(err_pos("a :- b; c."), (1, 7));
    }
}
