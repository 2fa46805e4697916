//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula ::= imp ( "<->" imp )*
//! imp     ::= or ( "->" imp )?
//! or      ::= and ( "|" and )*
//! and     ::= unary ( "&" unary )*
//! unary   ::= "~" unary | ("forall" | "exists") ident "." formula | primary
//! primary ::= "false" | "(" formula ")" | ident ( "(" term ("," term)* ")" )?
//! term    ::= ident ( "(" term ("," term)* ")" )?
//! ```
//!
//! Quantifiers extend as far right as possible. `#` starts a comment that
//! runs to the end of the line. An identifier in term position is a
//! variable when bound by an enclosing quantifier, a constant when the
//! signature declares it, and otherwise a free variable.

use std::fmt;

use thiserror::Error;

use super::formula::{Atom, Formula};
use super::signature::{Signature, SymbolKind};
use super::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: found {found}, expected {}", expected.join(" or "))]
    Syntax { pos: Pos, found: String, expected: Vec<&'static str> },
    #[error("arity mismatch at {pos}: {symbol}/{expected} applied to {found} argument(s)")]
    Arity { pos: Pos, symbol: String, expected: usize, found: usize },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("variable `{var}` at {pos} shadows an enclosing binder or a declared symbol")]
    Shadowing { pos: Pos, var: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::Arity { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::Shadowing { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Forall,
    Exists,
    False,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::False => "`false`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn position(src: &str, offset: usize) -> Pos {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
    Pos { offset, line, column }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                let word = &src[start..i];
                out.push((
                    match word {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        "false" => Tok::False,
                        _ => Tok::Ident(word.to_string()),
                    },
                    start,
                ));
                continue;
            }
            _ => {
                let found = src[start..].chars().next().map(|c| format!("`{c}`")).unwrap_or_default();
                return Err(ParseError::Syntax { pos: position(src, start), found, expected: vec!["a token"] });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// Parses formulas and terms against a signature.
pub struct Parser<'a> {
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Parser { sig }
    }

    pub fn formula(&self, src: &str) -> Result<Formula, ParseError> {
        let mut st = State { src, toks: lex(src)?, at: 0, sig: self.sig, bound: Vec::new() };
        let f = st.formula()?;
        st.expect(Tok::Eof, "end of input")?;
        Ok(f)
    }

    pub fn term(&self, src: &str) -> Result<Term, ParseError> {
        let mut st = State { src, toks: lex(src)?, at: 0, sig: self.sig, bound: Vec::new() };
        let t = st.term()?;
        st.expect(Tok::Eof, "end of input")?;
        Ok(t)
    }
}

/// Parses against the geometry signature.
pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    Parser::new(&Signature::geometry()).formula(src)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    Parser::new(&Signature::geometry()).term(src)
}

struct State<'s> {
    src: &'s str,
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'s Signature,
    bound: Vec<String>,
}

impl State<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        position(self.src, self.toks[self.at].1)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax { pos: self.pos(), found: self.peek().describe(), expected }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![what]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let pos = self.pos();
                let var = match self.peek().clone() {
                    Tok::Ident(v) => v,
                    _ => return Err(self.error(vec!["variable"])),
                };
                self.bump();
                if self.bound.contains(&var) || self.sig.is_declared(&var) {
                    return Err(ParseError::Shadowing { pos, var });
                }
                self.expect(Tok::Dot, "`.`")?;
                self.bound.push(var.clone());
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                Ok(if universal { Formula::forall(var, body) } else { Formula::exists(var, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let pos = self.pos();
                self.bump();
                let args = self.arguments()?;
                match self.sig.kind(&name) {
                    Some(SymbolKind::Predicate(n)) | Some(SymbolKind::Defined(n)) => {
                        if n != args.len() {
                            return Err(ParseError::Arity { pos, symbol: name, expected: n, found: args.len() });
                        }
                        Ok(Formula::Atom(Atom::new(name, args)))
                    }
                    _ => Err(ParseError::UnknownSymbol { pos, name }),
                }
            }
            _ => Err(self.error(vec!["`~`", "`forall`", "`exists`", "`false`", "`(`", "predicate"])),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.bump();
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.error(vec!["`,`", "`)`"])),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        let name = match self.peek().clone() {
            Tok::Ident(name) => name,
            _ => return Err(self.error(vec!["term"])),
        };
        self.bump();
        let applied = *self.peek() == Tok::LParen;
        let args = self.arguments()?;
        if self.bound.contains(&name) {
            if applied {
                return Err(ParseError::UnknownSymbol { pos, name });
            }
            return Ok(Term::Var(name));
        }
        match self.sig.kind(&name) {
            Some(SymbolKind::Function(n)) => {
                if n != args.len() {
                    return Err(ParseError::Arity { pos, symbol: name, expected: n, found: args.len() });
                }
                Ok(Term::App(name, args))
            }
            Some(SymbolKind::Constant) if !applied => Ok(Term::Const(name)),
            Some(SymbolKind::Constant) => Err(ParseError::Arity { pos, symbol: name, expected: 0, found: args.len() }),
            Some(_) => Err(ParseError::UnknownSymbol { pos, name }),
            None if applied => Err(ParseError::UnknownSymbol { pos, name }),
            None => Ok(Term::Var(name)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn parses_axiom_i5() {
        let f = parse_formula("forall l. ~Undir(l,l)").unwrap();
        assert_eq!(f, Formula::forall("l", Formula::imp(Formula::undir(v("l"), v("l")), Formula::False)));
    }

    #[test]
    fn parses_sym() {
        let f = parse_formula("forall l. forall m. (Undir(l,rev(m)) -> Undir(m,rev(l)))").unwrap();
        let body = Formula::imp(Formula::undir(v("l"), Term::rev(v("m"))), Formula::undir(v("m"), Term::rev(v("l"))));
        assert_eq!(f, Formula::forall_many(&["l", "m"], body));
    }

    #[test]
    fn arity_mismatch() {
        let err = parse_formula("Undir(l)").unwrap_err();
        assert!(matches!(err, ParseError::Arity { ref symbol, expected: 2, found: 1, .. } if symbol == "Undir"));
        assert!(matches!(parse_formula("Undir(rev(l,m),l)"), Err(ParseError::Arity { .. })));
    }

    #[test]
    fn unknown_symbols() {
        assert!(matches!(parse_formula("Foo(l,m)"), Err(ParseError::UnknownSymbol { .. })));
        assert!(matches!(parse_formula("Undir(f(l),m)"), Err(ParseError::UnknownSymbol { .. })));
    }

    #[test]
    fn shadowing_rejected() {
        let err = parse_formula("forall l. forall l. Undir(l,l)").unwrap_err();
        assert!(matches!(err, ParseError::Shadowing { ref var, .. } if var == "l"));
        assert!(matches!(parse_formula("forall rev. Undir(rev,rev)"), Err(ParseError::Shadowing { .. })));
    }

    #[test]
    fn syntax_error_has_position_and_expectations() {
        let err = parse_formula("Undir(l,m) &\n  | Undir(m,l)").unwrap_err();
        match err {
            ParseError::Syntax { pos, expected, .. } => {
                assert_eq!((pos.line, pos.column), (2, 3));
                assert!(expected.contains(&"`forall`"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("~Undir(a,b) & Undir(b,c) | Undir(c,d) -> Undir(d,e) -> false").unwrap();
        let u = |x: &str, y: &str| Formula::undir(v(x), v(y));
        let expected = Formula::imp(
            Formula::or(Formula::and(Formula::not(u("a", "b")), u("b", "c")), u("c", "d")),
            Formula::imp(u("d", "e"), Formula::False),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let f = parse_formula("Undir(a,a) & forall x. Undir(x,a) | Undir(a,x)").unwrap();
        let body = Formula::or(Formula::undir(v("x"), v("a")), Formula::undir(v("a"), v("x")));
        assert_eq!(f, Formula::and(Formula::undir(v("a"), v("a")), Formula::forall("x", body)));
    }

    #[test]
    fn iff_desugars() {
        let f = parse_formula("Undir(a,b) <-> Undir(b,a)").unwrap();
        let (p, q) = (Formula::undir(v("a"), v("b")), Formula::undir(v("b"), v("a")));
        assert_eq!(f, Formula::and(Formula::imp(p.clone(), q.clone()), Formula::imp(q, p)));
    }

    #[test]
    fn comments_and_constants() {
        let mut sig = Signature::geometry();
        sig.add_constant("c").unwrap();
        let f = Parser::new(&sig).formula("Undir(c, x) # trailing comment").unwrap();
        assert_eq!(f, Formula::undir(Term::constant("c"), v("x")));
    }
}
