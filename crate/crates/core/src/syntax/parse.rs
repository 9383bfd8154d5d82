//! Concrete syntax:
//!
//! ```text
//! term := ident | '(' '\' ident+ '.' term ')' | '(' term term+ ')'
//! ```
//!
//! Each parenthesised application group is one tuple application, so
//! `(f a b)` and `((f a) b)` are different terms. `#` starts a comment that
//! runs to the end of the line.

use std::fmt;

use thiserror::Error;

use super::{is_ident, Ident, Term, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken {
        expected: &'static str,
        found: String,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    /// `(f)`: an application group with no arguments.
    EmptyTuple,
    /// `(\. e)`: a binder with no parameters.
    EmptyBinder,
    DuplicateParam(Ident),
    TrailingInput(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::EmptyTuple => {
                f.write_str("arity-zero tuple: an application needs at least one argument")
            }
            ParseErrorKind::EmptyBinder => {
                f.write_str("arity-zero tuple: an abstraction needs at least one parameter")
            }
            ParseErrorKind::DuplicateParam(x) => {
                write!(f, "parameter `{x}` is bound twice by the same abstraction")
            }
            ParseErrorKind::TrailingInput(tok) => write!(f, "unexpected {tok} after term"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Lambda,
    Dot,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Open => f.write_str("'('"),
            Tok::Close => f.write_str("')'"),
            Tok::Lambda => f.write_str("'\\'"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            toks.push((tok, pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    name.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            debug_assert!(is_ident(&name));
            toks.push((Tok::Ident(name), pos));
            continue;
        }
        return Err(ParseError {
            line,
            column,
            kind: ParseErrorKind::UnexpectedChar(c),
        });
    }
    Ok((toks, Pos { line, column }))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.at)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |(_, p)| *p)
    }

    fn error_at(&self, pos: Pos, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: pos.line,
            column: pos.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((tok, pos)) => self.error_at(
                *pos,
                ParseErrorKind::UnexpectedToken {
                    expected,
                    found: tok.to_string(),
                },
            ),
            None => self.error_at(self.end, ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some((t, _)) if *t == tok => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some((Tok::Ident(name), _)) => {
                self.at += 1;
                Ok(Term::Var(
                    Ident::new(&name).expect("lexer yields valid identifiers"),
                ))
            }
            Some((Tok::Open, open)) => {
                self.at += 1;
                if matches!(self.peek(), Some((Tok::Lambda, _))) {
                    self.at += 1;
                    self.abstraction(open)
                } else {
                    self.application(open)
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn abstraction(&mut self, open: Pos) -> Result<Term, ParseError> {
        let mut params = Vec::new();
        while let Some((Tok::Ident(name), _)) = self.peek().cloned() {
            self.at += 1;
            params.push(Ident::new(&name).expect("lexer yields valid identifiers"));
        }
        if params.is_empty() && matches!(self.peek(), Some((Tok::Dot, _))) {
            return Err(self.error_at(self.pos(), ParseErrorKind::EmptyBinder));
        }
        self.expect(Tok::Dot, "a parameter or '.'")?;
        let body = self.term()?;
        self.expect(Tok::Close, "')' closing the abstraction")?;
        Term::fun(params, body).map_err(|e| match e {
            TermError::DuplicateParam(x) => self.error_at(open, ParseErrorKind::DuplicateParam(x)),
            TermError::EmptyParams => self.error_at(open, ParseErrorKind::EmptyBinder),
            other => unreachable!("abstraction construction cannot fail with {other}"),
        })
    }

    fn application(&mut self, open: Pos) -> Result<Term, ParseError> {
        if matches!(self.peek(), Some((Tok::Close, _))) {
            return Err(self.error_at(open, ParseErrorKind::EmptyTuple));
        }
        let head = self.term()?;
        let mut args = Vec::new();
        while !matches!(self.peek(), Some((Tok::Close, _)) | None) {
            args.push(self.term()?);
        }
        if args.is_empty() && self.peek().is_some() {
            return Err(self.error_at(open, ParseErrorKind::EmptyTuple));
        }
        self.expect(Tok::Close, "')' closing the application")?;
        Ok(Term::app(head, args).expect("argument tuple checked non-empty"))
    }
}

/// Parses exactly one term; trailing tokens are an error.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let (toks, end) = lex(src)?;
    let mut p = Parser { toks, at: 0, end };
    let t = p.term()?;
    if let Some((tok, pos)) = p.peek() {
        return Err(p.error_at(*pos, ParseErrorKind::TrailingInput(tok.to_string())));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Term {
        Term::var(name).unwrap()
    }

    fn id(name: &str) -> Ident {
        Ident::new(name).unwrap()
    }

    #[test]
    fn atoms_and_groups() {
        assert_eq!(parse("x").unwrap(), v("x"));
        assert_eq!(
            parse("(\\x y. x)").unwrap(),
            Term::fun(vec![id("x"), id("y")], v("x")).unwrap()
        );
        let inner = Term::app(v("f"), vec![v("a"), v("b")]).unwrap();
        assert_eq!(
            parse("((f a b) c)").unwrap(),
            Term::app(inner, vec![v("c")]).unwrap()
        );
    }

    #[test]
    fn comments_whitespace_and_lambda_sign() {
        let src = "# identity\n(  λx .\n   x ) # trailing\n";
        assert_eq!(parse(src).unwrap(), parse("(\\x. x)").unwrap());
    }

    #[test]
    fn arity_zero_tuples_are_rejected() {
        let e = parse("(f)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyTuple);
        assert_eq!((e.line, e.column), (1, 1));
        assert!(e.to_string().contains("arity-zero"));
        assert_eq!(parse("()").unwrap_err().kind, ParseErrorKind::EmptyTuple);
        assert_eq!(
            parse("(\\. x)").unwrap_err().kind,
            ParseErrorKind::EmptyBinder
        );
    }

    #[test]
    fn positions_are_reported() {
        let e = parse("(f a\n  $)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));

        let e = parse("(f a").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));

        let e = parse("x y").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(matches!(e.kind, ParseErrorKind::TrailingInput(_)));
    }

    #[test]
    fn duplicate_parameters() {
        let e = parse("(\\x x. x)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateParam(id("x")));
    }

    #[test]
    fn malformed_binders() {
        assert!(parse("(\\x x)").is_err());
        assert!(parse("(\\x. x y)").is_err());
        assert!(parse("(\\x.)").is_err());
        assert!(parse(")").is_err());
        assert!(parse("").is_err());
    }
}
