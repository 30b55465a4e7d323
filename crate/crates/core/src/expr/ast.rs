use std::fmt;

use crate::error::Result;
use crate::poly::{format_rational, Rational, RationalFunction, Var};

/// Expression tree produced by the parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Rational),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

impl Expr {
    /// Evaluates the tree to a reduced rational function. Fails only on
    /// division by an expression that is identically zero.
    pub fn lower(&self) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Const(c) => RationalFunction::constant(c.clone()),
            Expr::Var(v) => RationalFunction::var(v.clone()),
            Expr::Add(a, b) => &a.lower()? + &b.lower()?,
            Expr::Sub(a, b) => &a.lower()? - &b.lower()?,
            Expr::Mul(a, b) => &a.lower()? * &b.lower()?,
            Expr::Div(a, b) => a.lower()?.checked_div(&b.lower()?)?,
            Expr::Pow(a, e) => a.lower()?.pow(*e),
            Expr::Neg(a) => -a.lower()?,
        })
    }

    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<Var> {
        fn walk(e: &Expr, out: &mut Vec<Var>) {
            match e {
                Expr::Const(_) => {}
                Expr::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Expr::Pow(a, _) | Expr::Neg(a) => walk(a, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", format_rational(c)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
            Expr::Neg(a) => write!(f, "-({a})"),
        }
    }
}
