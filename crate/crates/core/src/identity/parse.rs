//! S-expression syntax for terms and identity files.
//!
//! ```text
//! term := var | @const | (* term term) | (inv term) | (local term) | (meet term term)
//! line := name [vars...]? term = term (= term)*
//! ```
//!
//! Lines starting with `#` are comments. A chain `a = b = c` expands into the
//! identities `name[1]: a = b` and `name[2]: b = c`.

use std::fmt;

use thiserror::Error;

use super::{Identity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    LBracket,
    RBracket,
    Eq,
    Atom(&'a str),
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("("),
            Tok::Close => f.write_str(")"),
            Tok::LBracket => f.write_str("["),
            Tok::RBracket => f.write_str("]"),
            Tok::Eq => f.write_str("="),
            Tok::Atom(a) => f.write_str(a),
        }
    }
}

fn tokenize(text: &str, line: usize) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b'(' => Some(Tok::Open),
            b')' => Some(Tok::Close),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i + 1, t));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || b"@*_.'".contains(&c) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || b"@*_.'".contains(&bytes[i])) {
                i += 1;
            }
            out.push((start + 1, Tok::Atom(&text[start..i])));
        } else {
            return Err(ParseError {
                line,
                column: i + 1,
                message: format!("unexpected character {:?}", c as char),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        let column = self.toks.get(self.pos).map_or(self.end_column, |t| t.0);
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok<'a>> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok<'static>) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected `{want}`, found `{t}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn name(&self, atom: &str) -> Result<(), ParseError> {
        let ok = atom.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && atom.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        if ok {
            Ok(())
        } else {
            Err(self.err(format!("invalid name `{atom}`")))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.next() {
            Some(Tok::Atom(a)) => {
                if let Some(c) = a.strip_prefix('@') {
                    self.pos -= 1;
                    self.name(c)?;
                    self.pos += 1;
                    Ok(Term::Const(c.to_owned()))
                } else {
                    self.pos -= 1;
                    self.name(a)?;
                    self.pos += 1;
                    Ok(Term::Var(a.to_owned()))
                }
            }
            Some(Tok::Open) => {
                let head = match self.next() {
                    Some(Tok::Atom(h)) => h,
                    _ => {
                        self.pos -= 1;
                        return Err(self.err("expected an operator after `(`"));
                    }
                };
                let t = match head {
                    "*" => {
                        let a = self.term()?;
                        let b = self.term()?;
                        Term::op(a, b)
                    }
                    "inv" => Term::inv(self.term()?),
                    "local" => Term::local(self.term()?),
                    "meet" => {
                        let a = self.term()?;
                        let b = self.term()?;
                        Term::meet(a, b)
                    }
                    other => {
                        self.pos -= 1;
                        return Err(self.err(format!("unknown operator `{other}`")));
                    }
                };
                self.expect(Tok::Close)?;
                Ok(t)
            }
            Some(t) => {
                self.pos -= 1;
                Err(self.err(format!("unexpected `{t}`")))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a single term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: tokenize(text, 1)?,
        pos: 0,
        line: 1,
        end_column: text.len() + 1,
    };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

fn parse_line(text: &str, line: usize) -> Result<Vec<Identity>, ParseError> {
    let mut p = Parser {
        toks: tokenize(text, line)?,
        pos: 0,
        line,
        end_column: text.len() + 1,
    };
    let name = match p.next() {
        Some(Tok::Atom(a)) => a.to_owned(),
        _ => {
            p.pos = 0;
            return Err(p.err("expected an identity name"));
        }
    };
    let mut declared = None;
    if p.peek() == Some(&Tok::LBracket) {
        p.pos += 1;
        let mut vars = Vec::new();
        loop {
            match p.next() {
                Some(Tok::RBracket) => break,
                Some(Tok::Atom(a)) => {
                    p.pos -= 1;
                    p.name(a)?;
                    p.pos += 1;
                    vars.push(a.to_owned());
                }
                _ => {
                    p.pos -= 1;
                    return Err(p.err("expected a variable name or `]`"));
                }
            }
        }
        declared = Some(vars);
    }
    let mut sides = vec![p.term()?];
    while p.peek() == Some(&Tok::Eq) {
        p.pos += 1;
        sides.push(p.term()?);
    }
    if p.pos < p.toks.len() {
        return Err(p.err("expected `=` or end of line"));
    }
    if sides.len() < 2 {
        return Err(p.err("an identity needs at least one `=`"));
    }
    let chained = sides.len() > 2;
    let mut out = Vec::new();
    for (i, pair) in sides.windows(2).enumerate() {
        let id_name = if chained {
            format!("{name}[{}]", i + 1)
        } else {
            name.clone()
        };
        let id = match &declared {
            Some(vars) => Identity::with_variables(id_name, pair[0].clone(), pair[1].clone(), vars.clone()),
            None => Ok(Identity::new(id_name, pair[0].clone(), pair[1].clone())),
        };
        out.push(id.map_err(|msg| ParseError {
            line,
            column: 1,
            message: msg,
        })?);
    }
    Ok(out)
}

/// Parses an identity file: one named identity (or chain) per line.
pub fn parse_identities(text: &str) -> Result<Vec<Identity>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.extend(parse_line(line, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::Var(s.into())
    }

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_term("(* (* x z) (* y z))").unwrap(),
            Term::op(Term::op(v("x"), v("z")), Term::op(v("y"), v("z")))
        );
        assert_eq!(parse_term("(inv x)").unwrap(), Term::inv(v("x")));
        assert_eq!(
            parse_term("(* (meet x y) y)").unwrap(),
            Term::op(Term::meet(v("x"), v("y")), v("y"))
        );
        assert_eq!(parse_term("@r").unwrap(), Term::Const("r".into()));
        assert_eq!(parse_term("(local x)").unwrap(), Term::local(v("x")));
    }

    #[test]
    fn reports_positions() {
        let e = parse_term("(* x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_term("(foo x)").unwrap_err();
        assert_eq!(e.column, 2);
        assert!(e.message.contains("foo"));
        let e = parse_term("x y").unwrap_err();
        assert_eq!(e.column, 3);
        let e = parse_term("(* x $)").unwrap_err();
        assert_eq!(e.column, 6);
        assert!(parse_term(")").is_err());
        assert!(parse_term("(inv x y)").is_err());
    }

    #[test]
    fn parses_identity_lines() {
        let ids = parse_identities("# comment\n\n3.24 [x y z w] (* x y) = (* y x)\nX (* x @r) = x\n").unwrap();
        assert_eq!(ids.len(), 2);
        assert_eq!(ids[0].name, "3.24");
        assert_eq!(ids[0].variables, vec!["x", "y", "z", "w"]);
        assert_eq!(ids[1].variables, vec!["x"]);

        let chain = parse_identities("16 (* (* y x) y) = x = (* y (* x y))").unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].name, "16[1]");
        assert_eq!(chain[1].name, "16[2]");
        assert_eq!(chain[0].variables, vec!["y", "x"]);
    }

    #[test]
    fn rejects_bad_lines() {
        let e = parse_identities("a\nb (* x y)\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_identities("n [x] (* x y) = x").is_err());
        assert!(parse_identities("n (* x y) = ").is_err());
        assert!(parse_identities("n [x (* x x) = x").is_err());
    }
}
