//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' nat)?
//! atom   := number | ident | '(' expr ')'
//! ```

use super::ast::Expr;
use crate::error::{Error, Result};
use crate::poly::{parse_rational, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (at, tok) = lx.next()?;
            let end = tok == Tok::End;
            out.push((at, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if b.is_ascii_digit() || b == b'.' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
                self.pos += 1;
            }
            return Ok((start, Tok::Num(self.src[start..self.pos].to_string())));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        if b"+-*/^()".contains(&b) {
            self.pos += 1;
            return Ok((start, Tok::Op(b as char)));
        }
        let ch = self.src[start..].chars().next().unwrap();
        Err(Error::Syntax { offset: start, message: format!("unexpected character `{ch}`") })
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
}

/// Parses `text` for a problem with `n` independent variables.
pub fn parse(text: &str, n: usize) -> Result<Expr> {
    if n < 2 {
        return Err(Error::Invalid(format!("dimension must be at least 2, got {n}")));
    }
    let mut p = Parser { toks: Lexer::tokens(text)?, at: 0, n };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(s) => format!("number `{s}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax { offset: self.offset(), message }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Tok::Num(s) if s.bytes().all(|b| b.is_ascii_digit()) => {
                let e: u32 = s
                    .parse()
                    .map_err(|_| Error::Syntax { offset: at, message: format!("exponent `{s}` too large") })?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            Tok::Num(_) => Err(Error::NonIntegerExponent { offset: at }),
            Tok::Op('-') => Err(Error::Syntax {
                offset: at,
                message: "exponents must be non-negative integer literals".into(),
            }),
            t => Err(Error::Syntax { offset: at, message: format!("expected an exponent, found {}", describe(&t)) }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(s) => {
                let q = parse_rational(&s)
                    .map_err(|_| Error::Syntax { offset: at, message: format!("malformed number `{s}`") })?;
                Ok(Expr::Const(q))
            }
            Tok::Ident(name) => Ok(Expr::Var(Var::from_name(&name, self.n)?)),
            Tok::Op('(') => {
                let e = self.expr()?;
                match self.bump() {
                    Tok::Op(')') => Ok(e),
                    t => Err(Error::Syntax {
                        offset: self.toks[self.at.saturating_sub(usize::from(t != Tok::End))].0,
                        message: format!("expected `)`, found {}", describe(&t)),
                    }),
                }
            }
            t => Err(Error::Syntax { offset: at, message: format!("expected a value, found {}", describe(&t)) }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, MultiPoly, RationalFunction};

    fn v(i: usize, j: usize) -> Box<Expr> {
        Box::new(Expr::Var(Var::p(i, j)))
    }

    #[test]
    fn tree_shape() {
        let e = parse("p22 - p11^2", 2).unwrap();
        assert_eq!(e, Expr::Sub(v(2, 2), Box::new(Expr::Pow(v(1, 1), 2))));
        let e = parse("-p11^2", 2).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(v(1, 1), 2))));
        let e = parse("p11 - p12 - p22", 2).unwrap();
        assert_eq!(e, Expr::Sub(Box::new(Expr::Sub(v(1, 1), v(1, 2))), v(2, 2)));
    }

    #[test]
    fn parameters() {
        let e = parse("k0*(p11*p22 - p12^2) + k4", 2).unwrap();
        let vars = e.variables();
        assert!(vars.contains(&Var::param("k0")));
        assert!(vars.contains(&Var::param("k4")));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse("p11 +", 2).unwrap_err(),
            Error::Syntax { offset: 5, message: "expected a value, found end of input".into() }
        );
        assert!(matches!(parse("p13", 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(parse("p11^1.5", 2), Err(Error::NonIntegerExponent { offset: 4 })));
        assert!(matches!(parse("(p11", 2), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("p11 # 2", 2), Err(Error::Syntax { offset: 4, .. })));
        assert_eq!(parse("1/0", 2).unwrap().lower(), Err(Error::DivisionByZero));
        assert_eq!(parse("1/(p11 - p11)", 2).unwrap().lower(), Err(Error::DivisionByZero));
    }

    #[test]
    fn lowering() {
        let f = parse("p22 - p11^2", 2).unwrap().lower().unwrap();
        let expect = &MultiPoly::var(Var::p(2, 2)) - &MultiPoly::var(Var::p(1, 1)).pow(2);
        assert_eq!(f, RationalFunction::from_poly(expect));
        let g = parse("(p12^2-1)/p11", 2).unwrap().lower().unwrap();
        assert_eq!(g.denom(), &MultiPoly::var(Var::p(1, 1)));
        assert_eq!(parse("2.5*2", 2).unwrap().lower().unwrap(), RationalFunction::constant(int(5)));
    }
}
